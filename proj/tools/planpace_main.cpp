// Thin executable wrapper; all behavior lives in the library so the CLI can
// be exercised from tests.

#include "planpace/harness.hpp"

int main(int argc, char** argv) { return planpace::cli_main(argc, argv); }
