#define DOCTEST_CONFIG_IMPLEMENT
#include <doctest.h>

#include "tllcd/errors.hpp"

int main(int argc, char** argv) {
    tllcd::set_warnings_enabled(false);
    doctest::Context context(argc, argv);
    return context.run();
}
