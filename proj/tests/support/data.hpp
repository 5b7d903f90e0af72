#pragma once

#include <string>

#include "sofic/presentation.hpp"

namespace sofic::testing {

inline std::string data_path(const std::string& name)
{
    return std::string(SOFIC_DATA_DIR) + "/" + name;
}

inline Presentation load(const std::string& name)
{
    return parse_file(data_path(name));
}

} // namespace sofic::testing
