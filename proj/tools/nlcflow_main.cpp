#include <vector>

#include "nlc/cli.hpp"

int main(int argc, char** argv) {
    return nlc::cli_main(std::vector<std::string>(argv + 1, argv + argc));
}
