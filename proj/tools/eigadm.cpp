#include "eigadm/cli.h"

int main(int argc, char** argv) { return eigadm::cli::run(argc, argv); }
