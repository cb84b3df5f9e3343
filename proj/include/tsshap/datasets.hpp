#pragma once

#include <string>
#include <vector>

namespace tsshap {

/// Public datasets the CLI can pull: us-unemployment (monthly unemployment
/// rate), bike-sharing (daily rentals with weather regressors),
/// peyton-manning (log daily page views). Raw downloads are normalized to
/// the tool's CSV schema and their checksums are pinned at first fetch in
/// <dir>/datasets.lock.json.
std::vector<std::string> dataset_names();

/// Download (or reuse) a dataset into `dir`; returns the normalized CSV
/// path. `mirror` (or $TSSHAP_DATASET_MIRROR) overrides the upstream base
/// URL for air-gapped mirrors.
std::string fetch_dataset(const std::string& name, const std::string& dir,
                          std::string mirror = "");

// building blocks, exposed for tests
std::string http_get(const std::string& url);
std::string sha256_hex(const std::string& bytes);
std::string zip_extract_member(const std::string& zip_bytes, const std::string& member);
std::string normalize_dataset(const std::string& name, const std::string& raw);
std::string dataset_mirror_filename(const std::string& name);

}  // namespace tsshap
