// Regenerates the bundled .sos files in specs/ from the programmatic
// builders. Run from the repository root after changing a builder; the test
// suite asserts the bundled files match.

#include <fstream>
#include <iostream>

#include "sosd/axioms.hpp"
#include "sosd/linda.hpp"
#include "sosd/parser.hpp"

int main(int argc, char** argv) {
  std::string dir = argc > 1 ? argv[1] : "specs";
  auto emit = [&](const std::string& name, const sosd::SpecFile& spec) {
    std::string path = dir + "/" + name;
    std::ofstream out(path, std::ios::binary);
    if (!out) {
      std::cerr << "cannot write " << path << "\n";
      return 1;
    }
    out << sosd::print_spec(spec);
    std::cout << "wrote " << path << "\n";
    return 0;
  };

  int rc = 0;
  rc |= emit("linda.sos", sosd::linda::linda_tss({"u"}));
  rc |= emit("linda_uv.sos", sosd::linda::linda_tss({"u", "v"}));
  rc |= emit("bccspd.sos", sosd::bccspd_spec({"a", "b"}, {"d0", "d1"}));
  rc |= emit("bccspd_merge.sos", sosd::bccspd_spec({"a", "b"}, {"d0", "d1"}, true));
  return rc;
}
