#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <iostream>

#include "convpde/acceptance.hpp"

TEST_CASE("acceptance suite") {
    CHECK(convpde::report_acceptance(std::cout));
}
