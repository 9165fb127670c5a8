#pragma once
// CLI invocations whose outputs are pinned byte-for-byte under tests/golden.

#include <string>
#include <vector>

#include "cli_harness.hpp"

namespace cli {

struct GoldenCase {
  std::string name;    // golden file name
  std::string args;    // arguments; "@OUT" is replaced by the output path
  std::string output;  // file name written in the scratch dir ("" = stdout)
};

inline std::vector<GoldenCase> golden_cases() {
  const std::string oc = "--config '" + source_path("configs/oc_snspd.json") + "'";
  const std::string ar = "--config '" + source_path("configs/ar_on_substrate.json") + "'";
  const std::string counts = "'" + source_path("tests/data/counts.csv") + "'";
  const std::string curve = "'" + source_path("tests/data/de_curve.csv") + "'";
  return {
      {"coupling_curve_0_400.csv", "coupling-curve --from 0 --to 400 --step 5 --out @OUT", "out.csv"},
      {"coupling_curve_default.csv", "coupling-curve --thickness 45,100,200,400 --out @OUT", "out.csv"},
      {"stack_spectrum_oc.csv", "stack-spectrum " + oc + " --min 1500 --max 1600 --step 5 --out @OUT", "out.csv"},
      {"stack_spectrum_ar.csv", "stack-spectrum " + ar + " --min 1200 --max 1700 --step 10 --out @OUT", "out.csv"},
      {"fringe_synth_head.csv", "fringe synth --min 1500 --max 1501 --step 0.02 --out @OUT", "out.csv"},
      {"counts_report.csv", "de from-counts --in " + counts + " --out @OUT", "out.csv"},
      {"counts_report_raw.csv", "de from-counts --no-subtract --in " + counts + " --out @OUT", "out.csv"},
      {"design_substrate_trace.csv",
       "design --variable substrate_thickness_um --lower 45 --upper 400 --granularity 5 --trace-out @OUT", "out.csv"},
      {"design_cavity_result.csv",
       "design " + oc + " --variable cavity_thickness_nm --lower 50 --upper 600 --out @OUT", "out.csv"},
      {"de_enhancement.txt", "de enhancement 0.095 0.025 --after-label AR --before-label bare", ""},
      {"de_at_dark_rate.txt", "de at-dark-rate --curve " + curve + " --rate 316.227766 --label AR", ""},
  };
}

// Runs one case in `scratch`; returns the bytes that must match the golden.
inline std::string run_golden_case(const Scratch& scratch, const GoldenCase& c, int* exit_code) {
  std::string args = c.args;
  if (const auto p = args.find("@OUT"); p != std::string::npos) {
    args.replace(p, 4, "'" + (scratch / c.output).string() + "'");
  }
  const auto r = scratch.run(args);
  *exit_code = r.exit_code;
  if (c.output.empty()) return r.out;
  const auto data = slurp(scratch / c.output);
  std::error_code ec;
  fs::remove(scratch / c.output, ec);
  return data;
}

}  // namespace cli
