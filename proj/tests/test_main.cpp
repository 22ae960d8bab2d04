#define DOCTEST_CONFIG_IMPLEMENT
#include <doctest.h>

#include "qho/real.hpp"

int main(int argc, char** argv) {
    qho::set_precision_bits(256);
    return doctest::Context(argc, argv).run();
}
