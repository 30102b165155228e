#include "stp/fixtures.hpp"

#include "stp/economy_io.hpp"

namespace stp {

Economy fixture_economy(const std::string& name) {
  for (const auto& f : embedded_fixtures())
    if (name == f.name) return parse_economy(f.json);
  throw ModelError("unknown fixture '" + name + "'");
}

}  // namespace stp
