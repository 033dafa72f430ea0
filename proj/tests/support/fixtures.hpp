#pragma once

#include <string>

#include "wsp/core.hpp"

namespace fixtures {

// Three tasks, six users: s1 = s2, s1 != s3, s2 != s3.
inline wsp::Schema wstar() {
    wsp::Schema s;
    s.tasks = {"s1", "s2", "s3"};
    s.users = {"u1", "u2", "u3", "u4", "u5", "u6"};
    s.auth = {{0, 1, 2}, {0, 3, 4}, {0, 5}};
    s.constraints = {wsp::Constraint::eq(0, 1), wsp::Constraint::neq(0, 2), wsp::Constraint::neq(1, 2)};
    return s;
}

inline std::string path(const std::string& name) {
    return std::string(WSP_FIXTURE_DIR) + "/" + name;
}

} // namespace fixtures
