#include <iostream>

#include "app.hpp"
#include "cyltorsion/error.hpp"

int main(int argc, char** argv) {
  try {
    const auto config = cylt::app::parse_args(argc, argv);
    if (!config) return 0;
    return cylt::app::dispatch(*config);
  } catch (const cylt::Error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return e.exit_code();
  }
}
