#pragma once

#define POLARSIM_VERSION "0.1.0"

namespace polarsim {

inline const char* version() { return POLARSIM_VERSION; }

}  // namespace polarsim
