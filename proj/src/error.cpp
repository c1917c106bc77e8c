#include "hprr/error.hpp"

// Out-of-line anchor for the error hierarchy.
namespace hprr {}
