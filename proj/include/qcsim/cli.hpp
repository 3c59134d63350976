#ifndef QCSIM_CLI_HPP
#define QCSIM_CLI_HPP

#include <string>

#include "qcsim/regimes.hpp"

namespace qcsim {

// Subcommands: simulate, sweep, regimes. Exit 0 on success, 1 on usage or
// configuration errors, 2 on runtime simulation errors.
int cli_main(int argc, const char* const* argv);

// "uncertainty_lhs = ...\nwavelike_lhs = ...\nlabel = ..." (singular entries
// print as n/a with the label indeterminate).
std::string regime_report(const RegimeInputs& inputs, double epsilon);

}  // namespace qcsim

#endif
