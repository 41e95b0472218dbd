#pragma once

#include <iosfwd>
#include <string>

#include "core/voxel_image.hpp"

namespace topoiga {

/// Voxel file format:
///
///   TPIVOX 1
///   ndim <n>
///   dims <d0> [d1 [d2]]
///   spacing <s0> ...
///   origin <o0> ...          (optional, default 0)
///   type u8|f64
///   encoding ascii|binary
///   data
///   <payload, x fastest>
///
/// Binary payloads are little-endian. u8 values are divided by 255 on input.
enum class VoxelType { u8, f64 };
enum class VoxelEncoding { ascii, binary };

VoxelGrid read_voxels(std::istream& in);
VoxelGrid read_voxels(const std::string& path);

void write_voxels(std::ostream& out, const VoxelGrid& grid, VoxelType type = VoxelType::f64,
                  VoxelEncoding encoding = VoxelEncoding::ascii);
void write_voxels(const std::string& path, const VoxelGrid& grid, VoxelType type = VoxelType::f64,
                  VoxelEncoding encoding = VoxelEncoding::ascii);

/// A binary image as a u8 voxel file (values 0 / 1) on `box`.
void write_binary_image(const std::string& path, const BinaryImage& img, const Box& box);

}  // namespace topoiga
