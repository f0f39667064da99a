#include "haarverify/cli.hpp"

int main(int argc, char** argv) { return haarverify::run_cli(argc, argv); }
