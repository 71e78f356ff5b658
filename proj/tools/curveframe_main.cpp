#include <curveframe/cli.hpp>

int main(int argc, char** argv) { return curveframe::cli::run(argc, argv); }
