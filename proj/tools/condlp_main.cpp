#include "condlp/cli.hpp"

int main(int argc, char** argv) { return condlp::run_cli(argc, argv); }
