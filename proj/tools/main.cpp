#include <mcgip/cli.h>

#include <string>
#include <vector>

int main(int argc, char** argv) {
    std::vector<std::string> args(argv + 1, argv + argc);
    return mcgip::cli::run_command(args);
}
