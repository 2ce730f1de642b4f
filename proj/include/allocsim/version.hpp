#pragma once

namespace allocsim {

inline constexpr const char* version = "0.1.0";

}
