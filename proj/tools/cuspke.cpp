#include <CLI11.hpp>

#include "cuspke/cli.hpp"

int main(int argc, char** argv) {
  CLI::App app{"cuspke: Kaehler-Einstein cusp laboratory"};
  std::string command, config, out = ".";
  app.add_option("command", command, "subcommand")
      ->required()
      ->check(CLI::IsMember(cuspke::cli::commands()));
  app.add_option("-c,--config", config, "INI configuration file")->check(CLI::ExistingFile);
  app.add_option("-o,--out", out, "output directory");
  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : cuspke::cli::kConfigError;
  }
  return cuspke::cli::run(command, config, out);
}
