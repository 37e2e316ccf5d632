#include "sbsn/cli.hpp"

int main(int argc, char** argv) { return sbsn::run_cli(argc, argv); }
