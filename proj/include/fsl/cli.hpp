#pragma once

namespace fsl::cli {

/// Dispatches forward | inverse | roundtrip | stability | charfn | oracle.
/// Exit codes: 0 success, 1 validation error, 2 numerical failure.
int run(int argc, const char* const* argv);

}  // namespace fsl::cli
