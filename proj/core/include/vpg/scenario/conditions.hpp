#pragma once

#include <array>
#include <string>
#include <vector>

namespace vpg::scenario {

enum class TimeOfDay { k5am, k7am, k9am, k11am, k1pm, k3pm, k5pm, k7pm };
enum class Weather {
  kClear,
  kCloudy,
  kLightFog,
  kHeavyFog,
  kLightRain,
  kHeavyRain,
  kLightSnow,
  kHeavySnow
};

inline constexpr std::array<TimeOfDay, 8> kAllTimesOfDay = {
    TimeOfDay::k5am, TimeOfDay::k7am, TimeOfDay::k9am, TimeOfDay::k11am,
    TimeOfDay::k1pm, TimeOfDay::k3pm, TimeOfDay::k5pm, TimeOfDay::k7pm};
inline constexpr std::array<Weather, 8> kAllWeathers = {
    Weather::kClear,     Weather::kCloudy,    Weather::kLightFog,  Weather::kHeavyFog,
    Weather::kLightRain, Weather::kHeavyRain, Weather::kLightSnow, Weather::kHeavySnow};

std::string to_string(TimeOfDay t);
std::string to_string(Weather w);
TimeOfDay time_of_day_from_string(const std::string& name);
Weather weather_from_string(const std::string& name);

/// Lookup tables mapping the discrete condition enums to physical knobs.
/// The defaults are plausible monotone stand-ins and can be overridden from
/// the campaign config.
struct ConditionTables {
  // Sun-elevation light level per time of day, in kAllTimesOfDay order.
  std::array<double, 8> light_by_time = {0.05, 0.3, 0.7, 0.95, 1.0, 0.9, 0.6, 0.2};
  // Weather attenuation multiplier on ambient light, in kAllWeathers order.
  std::array<double, 8> light_attenuation = {1.0, 0.7, 0.5, 0.5, 0.6, 0.6, 0.65, 0.65};
  // Meteorological visibility in meters, in kAllWeathers order.
  std::array<double, 8> visibility_m = {10000.0, 8000.0, 200.0, 50.0,
                                        1000.0,  300.0,  800.0, 250.0};
  // Road traction scale, in kAllWeathers order.
  std::array<double, 8> traction = {1.0, 1.0, 1.0, 1.0, 0.8, 0.6, 0.55, 0.4};
};

/// Environmental parameters derived from (time of day, weather).
struct Conditions {
  TimeOfDay time_of_day = TimeOfDay::k1pm;
  Weather weather = Weather::kClear;
  double ambient_light = 1.0;   // [0, 1]
  double visibility_m = 10000.0;
  double traction_scale = 1.0;  // (0, 1]
  bool fog_present = false;
};

/// Pure function of the two enums (given the tables). fog_present is true for
/// fog weathers and for heavy precipitation.
Conditions derive_conditions(TimeOfDay t, Weather w,
                             const ConditionTables& tables = ConditionTables{});

}  // namespace vpg::scenario
