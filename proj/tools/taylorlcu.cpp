#include "taylorlcu/cli.hpp"

int main(int argc, char** argv) { return taylorlcu::run_cli(argc, argv); }
