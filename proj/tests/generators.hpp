#ifndef DERHAM_TESTS_GENERATORS_HPP
#define DERHAM_TESTS_GENERATORS_HPP

#include "derham/random.hpp"

namespace derham {
namespace testing = gen;
}

#endif
