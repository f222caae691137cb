#include "eh2/system.hpp"

#include <algorithm>

namespace eh2 {

const Zone* SystemSpec::find_zone(int id) const {
  auto it = std::find_if(zones.begin(), zones.end(), [&](const Zone& z) { return z.id == id; });
  return it == zones.end() ? nullptr : &*it;
}

const GenTech* SystemSpec::find_gen_tech(const std::string& id) const {
  auto it =
      std::find_if(gen_techs.begin(), gen_techs.end(), [&](const GenTech& t) { return t.id == id; });
  return it == gen_techs.end() ? nullptr : &*it;
}

const StorageTech* SystemSpec::find_storage_tech(const std::string& id) const {
  auto it = std::find_if(storage_techs.begin(), storage_techs.end(),
                         [&](const StorageTech& t) { return t.id == id; });
  return it == storage_techs.end() ? nullptr : &*it;
}

}  // namespace eh2
