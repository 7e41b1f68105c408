#pragma once

#include <string>

#include "trls/types.hpp"

namespace trls {

/// Write samples as CSV with header `x1,...,xd,y`, one row per sample,
/// LF line endings. Entries are printed with enough digits to round-trip.
void write_dataset_csv(const SampleSet& samples, const std::string& path);

/// Read a dataset written by write_dataset_csv (or any CSV matching the
/// header contract). Validates the header and rejects non-finite values.
SampleSet read_dataset_csv(const std::string& path);

}  // namespace trls
