#pragma once

namespace pettis {

/// Entry point of the pettis-forge tool. Returns 0 when every assertion
/// holds, 1 when a campaign found violations and 2 on usage or config errors.
int cli_main(int argc, char** argv);

}  // namespace pettis
