#pragma once

#include "longhot/grid.hpp"

#include "json.hpp"

#include <fstream>
#include <string>

namespace longhot {

struct Scene {
    std::string id;
    OccupancyGrid grid;
};

// Scene file: JSON header + row-major RLE cell string. Saving a loaded
// scene reproduces the file byte-for-byte.
inline std::string scene_to_json(const Scene& scene) {
    nlohmann::json j;
    j["cells"] = encode_cells_rle(scene.grid);
    j["format"] = "longhot-scene";
    j["height"] = scene.grid.height();
    j["id"] = scene.id;
    j["resolution"] = scene.grid.resolution();
    j["version"] = 1;
    j["width"] = scene.grid.width();
    return j.dump(2) + "\n";
}

inline Scene scene_from_json(const std::string& text) {
    nlohmann::json j;
    try {
        j = nlohmann::json::parse(text);
    } catch (const nlohmann::json::exception& e) {
        throw InvalidScene(std::string("scene parse error: ") + e.what());
    }
    if (j.value("format", "") != "longhot-scene")
        throw InvalidScene("not a longhot-scene file");
    const int width = j.at("width").get<int>();
    const int height = j.at("height").get<int>();
    const double resolution = j.at("resolution").get<double>();
    auto cells = decode_cells_rle(j.at("cells").get<std::string>(),
                                  static_cast<size_t>(width) * static_cast<size_t>(height));
    Scene scene{j.value("id", ""), OccupancyGrid::from_cells(width, height, resolution, std::move(cells))};
    return scene;
}

inline void save_scene(const Scene& scene, const std::string& path) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw InvalidScene("cannot open for write: " + path);
    out << scene_to_json(scene);
}

inline Scene load_scene(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw InvalidScene("cannot open scene file: " + path);
    std::string text((std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());
    return scene_from_json(text);
}

} // namespace longhot
