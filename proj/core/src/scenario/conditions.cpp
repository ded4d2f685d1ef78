#include "vpg/scenario/conditions.hpp"

#include "vpg/common/errors.hpp"

namespace vpg::scenario {

namespace {

constexpr std::array<const char*, 8> kTimeNames = {"5am", "7am", "9am", "11am",
                                                   "1pm", "3pm", "5pm", "7pm"};
constexpr std::array<const char*, 8> kWeatherNames = {
    "clear",      "cloudy",     "light_fog",  "heavy_fog",
    "light_rain", "heavy_rain", "light_snow", "heavy_snow"};

}  // namespace

std::string to_string(TimeOfDay t) { return kTimeNames[static_cast<std::size_t>(t)]; }
std::string to_string(Weather w) { return kWeatherNames[static_cast<std::size_t>(w)]; }

TimeOfDay time_of_day_from_string(const std::string& name) {
  for (std::size_t i = 0; i < kTimeNames.size(); ++i) {
    if (name == kTimeNames[i]) return static_cast<TimeOfDay>(i);
  }
  throw ConfigError("unknown time of day: '" + name + "'");
}

Weather weather_from_string(const std::string& name) {
  for (std::size_t i = 0; i < kWeatherNames.size(); ++i) {
    if (name == kWeatherNames[i]) return static_cast<Weather>(i);
  }
  throw ConfigError("unknown weather: '" + name + "'");
}

Conditions derive_conditions(TimeOfDay t, Weather w, const ConditionTables& tables) {
  const auto ti = static_cast<std::size_t>(t);
  const auto wi = static_cast<std::size_t>(w);
  Conditions out;
  out.time_of_day = t;
  out.weather = w;
  out.ambient_light = tables.light_by_time[ti] * tables.light_attenuation[wi];
  out.visibility_m = tables.visibility_m[wi];
  out.traction_scale = tables.traction[wi];
  out.fog_present = w == Weather::kLightFog || w == Weather::kHeavyFog ||
                    w == Weather::kHeavyRain || w == Weather::kHeavySnow;
  return out;
}

}  // namespace vpg::scenario
