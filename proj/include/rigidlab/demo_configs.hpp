#pragma once

#include <string>
#include <utility>
#include <vector>

namespace rigidlab {

// Bundled experiment recipes, embedded so `rigidlab demo <name>` works from
// any directory. The same texts live under docs/configs/.
const std::vector<std::pair<std::string, std::string>>& demo_configs();

const std::string* find_demo_config(const std::string& name);

}  // namespace rigidlab
