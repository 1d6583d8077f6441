// SPDX-License-Identifier: Apache-2.0
#pragma once

#define SPINNET_VERSION_MAJOR 0
#define SPINNET_VERSION_MINOR 1
#define SPINNET_VERSION_PATCH 0

namespace spinnet {

inline constexpr const char* version_string = "0.1.0";

}  // namespace spinnet
