#include "core/volume.hpp"

#include <cstring>
#include <filesystem>
#include <fstream>

#include "core/error.hpp"

namespace bodyct {

std::array<double, 3> VolumeGrid::extent() const {
    return {static_cast<double>(size[0]) * spacing[0], static_cast<double>(size[1]) * spacing[1],
            static_cast<double>(size[2]) * spacing[2]};
}

void VolumeGrid::validate() const {
    for (int a = 0; a < 3; ++a) {
        if (size[a] <= 0) fail(ErrorCode::invalid_argument, "volume size must be positive");
        if (!(spacing[a] > 0.0)) fail(ErrorCode::invalid_argument, "volume spacing must be positive");
    }
    if (static_cast<std::int64_t>(voxels.size()) != count())
        fail(ErrorCode::invalid_argument, "voxel count does not match volume size");
}

namespace {

namespace fs = std::filesystem;

nlohmann::ordered_json load_meta(const std::string& meta_path) {
    std::ifstream in(meta_path);
    if (!in) fail(ErrorCode::io, "cannot open volume metadata: " + meta_path);
    nlohmann::ordered_json j;
    try {
        in >> j;
    } catch (const nlohmann::json::exception& e) {
        fail(ErrorCode::parse, "volume metadata " + meta_path + ": " + e.what());
    }
    return j;
}

template <typename T>
std::vector<double> read_raw(const std::string& path, std::int64_t n) {
    std::ifstream in(path, std::ios::binary);
    if (!in) fail(ErrorCode::io, "cannot open voxel data: " + path);
    std::vector<T> buffer(static_cast<std::size_t>(n));
    in.read(reinterpret_cast<char*>(buffer.data()),
            static_cast<std::streamsize>(sizeof(T) * buffer.size()));
    if (in.gcount() != static_cast<std::streamsize>(sizeof(T) * buffer.size()))
        fail(ErrorCode::io, "voxel data " + path + " is shorter than the declared size");
    std::vector<double> out(buffer.size());
    for (std::size_t i = 0; i < buffer.size(); ++i) out[i] = static_cast<double>(buffer[i]);
    return out;
}

template <typename T>
void write_raw(const std::string& path, const std::vector<double>& voxels) {
    std::ofstream out(path, std::ios::binary);
    if (!out) fail(ErrorCode::io, "cannot write voxel data: " + path);
    std::vector<T> buffer(voxels.size());
    for (std::size_t i = 0; i < voxels.size(); ++i) buffer[i] = static_cast<T>(voxels[i]);
    out.write(reinterpret_cast<const char*>(buffer.data()),
              static_cast<std::streamsize>(sizeof(T) * buffer.size()));
}

}  // namespace

nlohmann::ordered_json read_volume_metadata(const std::string& meta_path) {
    return load_meta(meta_path);
}

VolumeGrid load_volume(const std::string& meta_path) {
    nlohmann::ordered_json j = load_meta(meta_path);
    VolumeGrid volume;
    try {
        auto size = j.at("size").get<std::vector<std::int64_t>>();
        auto spacing = j.at("spacing").get<std::vector<double>>();
        auto origin = j.at("origin").get<std::vector<double>>();
        if (size.size() != 3 || spacing.size() != 3 || origin.size() != 3)
            fail(ErrorCode::parse, "volume metadata " + meta_path + ": size/spacing/origin must have 3 entries");
        std::copy(size.begin(), size.end(), volume.size.begin());
        std::copy(spacing.begin(), spacing.end(), volume.spacing.begin());
        std::copy(origin.begin(), origin.end(), volume.origin.begin());
    } catch (const nlohmann::json::exception& e) {
        fail(ErrorCode::parse, "volume metadata " + meta_path + ": " + e.what());
    }
    std::string dtype = j.value("dtype", "float64");
    std::string data_file = j.value("data_file", "");
    if (data_file.empty()) fail(ErrorCode::parse, "volume metadata " + meta_path + ": missing data_file");
    std::string data_path = (fs::path(meta_path).parent_path() / data_file).string();

    if (dtype == "float64") volume.voxels = read_raw<double>(data_path, volume.count());
    else if (dtype == "float32") volume.voxels = read_raw<float>(data_path, volume.count());
    else if (dtype == "uint8") volume.voxels = read_raw<std::uint8_t>(data_path, volume.count());
    else if (dtype == "int16") volume.voxels = read_raw<std::int16_t>(data_path, volume.count());
    else fail(ErrorCode::parse, "volume metadata " + meta_path + ": unsupported dtype " + dtype);

    volume.validate();
    return volume;
}

void save_volume(const VolumeGrid& volume, const std::string& meta_path, const std::string& dtype,
                 const nlohmann::ordered_json& extra_metadata) {
    volume.validate();
    fs::path meta(meta_path);
    std::string stem = meta.stem().string();
    std::string data_file = stem + ".raw";
    std::string data_path = (meta.parent_path() / data_file).string();

    if (dtype == "float64") write_raw<double>(data_path, volume.voxels);
    else if (dtype == "float32") write_raw<float>(data_path, volume.voxels);
    else if (dtype == "uint8") write_raw<std::uint8_t>(data_path, volume.voxels);
    else if (dtype == "int16") write_raw<std::int16_t>(data_path, volume.voxels);
    else fail(ErrorCode::invalid_argument, "unsupported dtype " + dtype);

    nlohmann::ordered_json j;
    j["format"] = "bodyct-volume";
    j["schema_version"] = 1;
    j["size"] = volume.size;
    j["spacing"] = volume.spacing;
    j["origin"] = volume.origin;
    j["dtype"] = dtype;
    j["data_file"] = data_file;
    if (extra_metadata.is_object())
        for (const auto& [key, value] : extra_metadata.items()) j[key] = value;

    std::ofstream out(meta_path, std::ios::binary);
    if (!out) fail(ErrorCode::io, "cannot write volume metadata: " + meta_path);
    out << j.dump(2) << '\n';
}

}  // namespace bodyct
