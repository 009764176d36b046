#pragma once

#include <filesystem>
#include <string>

#include "scidebt/util.hpp"

namespace fixture {

// Writes a small but complete workspace into `dir`: seed dataset,
// unlabeled pool, calibration and survey inputs, and config.json whose
// paths point at those files plus a state/ directory for loop output.
// Returns the config path.
std::filesystem::path write_workspace(const std::filesystem::path& dir, std::uint64_t seed = 5);

// Label submissions for the first `n` items of a batch exported by select.
scidebt::json labels_for_batch(const scidebt::json& batch, std::size_t n, const std::string& annotator);

}  // namespace fixture
