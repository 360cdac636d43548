#pragma once

#include <cstdint>

#include <Eigen/Core>

namespace uavtrust {

using Vec3 = Eigen::Vector3d;
using UavId = std::uint32_t;

}  // namespace uavtrust
