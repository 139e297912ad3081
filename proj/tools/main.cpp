#include "commands.hpp"

int main(int argc, char** argv) { return sppal::cli::run_main(argc, argv); }
