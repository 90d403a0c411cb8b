#pragma once
// conventional include path for the vendored single-header nlohmann/json
#include "../../vendor/json.hpp"
