#pragma once

#include <string>
#include <vector>

#include "stp/economy.hpp"

namespace stp {

// Economy documents from fixtures/*.json, compiled into the binary.
struct EmbeddedFixture {
  const char* name;
  const char* json;
};

const std::vector<EmbeddedFixture>& embedded_fixtures();

// Parses the named fixture; throws ModelError for unknown names.
Economy fixture_economy(const std::string& name);

}  // namespace stp
