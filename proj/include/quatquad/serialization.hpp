#pragma once

#include <cmath>
#include <stdexcept>
#include <string>
#include <variant>

#include <json.hpp>

#include "quatquad/geometry.hpp"
#include "quatquad/oracle.hpp"
#include "quatquad/quaternion.hpp"
#include "quatquad/solver.hpp"

namespace quatquad {

/// Thrown when a JSON document does not have the expected shape.
struct JsonShapeError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

/// Quaternions serialize as the 4-array [w, x, y, z], scalar part first.
template <typename Scalar>
void to_json(nlohmann::json& j, const Quaternion<Scalar>& q) {
    j = nlohmann::json::array({q.w, q.x, q.y, q.z});
}

template <typename Scalar>
void from_json(const nlohmann::json& j, Quaternion<Scalar>& q) {
    if (!j.is_array() || j.size() != 4) {
        throw JsonShapeError("quaternion must be a 4-element array [w, x, y, z]");
    }
    for (const auto& entry : j) {
        if (!entry.is_number()) {
            throw JsonShapeError("quaternion components must be numbers");
        }
    }
    q.w = j[0].template get<Scalar>();
    q.x = j[1].template get<Scalar>();
    q.y = j[2].template get<Scalar>();
    q.z = j[3].template get<Scalar>();
    if (!(std::isfinite(q.w) && std::isfinite(q.x) && std::isfinite(q.y) && std::isfinite(q.z))) {
        throw JsonShapeError("quaternion components must be finite");
    }
}

template <typename Scalar>
void to_json(nlohmann::json& j, const SolutionCircle<Scalar>& c) {
    j = nlohmann::json{{"center", c.center},
                       {"radius", c.radius},
                       {"frame", nlohmann::json::array({c.plane.e1, c.plane.e2})}};
}

template <typename Scalar>
[[nodiscard]] nlohmann::json solution_set_to_json(const SolutionSet<Scalar>& set) {
    nlohmann::json j{{"kind", kind_name(kind(set))}};
    std::visit(
        [&](const auto& alt) {
            using T = std::decay_t<decltype(alt)>;
            if constexpr (std::is_same_v<T, PointSet<Scalar>>) {
                j["point"] = alt.point;
            } else if constexpr (std::is_same_v<T, TwoPointSet<Scalar>>) {
                j["points"] = nlohmann::json::array({alt.first, alt.second});
            } else if constexpr (std::is_same_v<T, SolutionCircle<Scalar>>) {
                j["center"] = alt.center;
                j["radius"] = alt.radius;
                j["frame"] = nlohmann::json::array({alt.plane.e1, alt.plane.e2});
            } else if constexpr (std::is_same_v<T, SphereSet<Scalar>>) {
                j["center"] = alt.center;
                j["radius"] = alt.radius;
            }
        },
        set);
    return j;
}

template <typename Scalar>
void to_json(nlohmann::json& j, const OracleReport<Scalar>& report) {
    j = nlohmann::json{{"roots", report.roots},
                       {"max_residual", report.max_residual},
                       {"verdict", std::string(verdict_name(report.verdict))}};
}

}  // namespace quatquad
