#include "iobt/harness.hpp"

int main(int argc, char** argv) { return iobt::run_cli(argc, argv); }
