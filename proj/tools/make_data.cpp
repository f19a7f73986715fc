// Regenerates the shipped observation file for the hmm-large benchmark:
//   ./tracemc_make_data > data/hmm_large_observations.txt
// The model itself regenerates the same values from the seed at runtime;
// the file exists so the data can be inspected and consumed elsewhere.
#include <cstdio>

#include "tracemc/models.hpp"

int main() {
  std::fputs(tracemc::models::hmm_large_data_file_text().c_str(), stdout);
  return 0;
}
