#pragma once
// Command line front end.  The parsing and dispatch live in the library so
// tests can drive the full pipeline in process and compare byte-exact
// output.  Exit codes: 0 success, 1 usage error, 2 numerical failure.

#include <iosfwd>
#include <string>
#include <vector>

namespace treesic::cli {

enum class ReproduceTarget {
    Table1,
    Table2,
    Table3,
    FigCri,
    FigThroughput,
    FigAmplitude,
    FigSensitivity,
    FigDaryMst,
    FigDaryThroughput,
};

int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err);
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace treesic::cli
