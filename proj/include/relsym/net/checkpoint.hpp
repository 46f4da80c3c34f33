#pragma once

#include <string>

#include "relsym/net/model.hpp"

namespace relsym::net {

// Versioned binary checkpoint: header with the architecture dimensions,
// followed by named parameter tensors in a fixed order (stored as float64).
void save_checkpoint(const std::string& path, const RelationalNet<float>& net);
RelationalNet<float> load_checkpoint(const std::string& path);

}  // namespace relsym::net
