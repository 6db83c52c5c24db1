#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace mpifs {

/// Entry point behind the `mpifs` binary. Subcommands:
///   render <config>            run and write the configured pgm/csv/trace outputs
///   eval <config> --phi a0,a1,...,ad   run, then print mu(phi) with 6 decimals
///   dist <a.csv> <b.csv>       print d_theta between two density CSVs, 9 decimals
///   check <config>             validate; print alpha_S, epsilon, N, residual
/// Flags: --trace --threads <n> --seed x[,y[,z]] --phi ... --allow-noncontractive
/// Exit codes: 0 ok, 1 validation/usage error, 2 resource cap hit.
int cli_main(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace mpifs
