// version.hpp

#pragma once

namespace tclprep {
inline constexpr const char* version = "0.1.0";
}
