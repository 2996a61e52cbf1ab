#include "nscorn/error.hpp"

namespace nscorn {}
