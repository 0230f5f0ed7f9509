// Copyright 2026 The covermap Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include "covermap/geojson.hpp"

#include <json.hpp>

#include "covermap/errors.hpp"
#include "covermap/textio.hpp"

namespace covermap {

namespace {

using nlohmann::json;

std::vector<Point> parse_ring(const json& ring) {
    if (!ring.is_array() || ring.size() < 3) {
        throw SchemaError("GeoJSON ring must be an array of at least 3 positions");
    }
    std::vector<Point> out;
    out.reserve(ring.size());
    for (const auto& pos : ring) {
        if (!pos.is_array() || pos.size() < 2) {
            throw SchemaError("GeoJSON position must be [x, y]");
        }
        out.push_back(Point{pos[0].get<double>(), pos[1].get<double>()});
    }
    // GeoJSON rings repeat the first vertex; ours are implicitly closed.
    if (out.size() > 3 && out.front().x == out.back().x && out.front().y == out.back().y) {
        out.pop_back();
    }
    return out;
}

void collect_geometry(const json& geom, RegionPolygon& poly) {
    const std::string type = geom.value("type", "");
    if (type == "Polygon") {
        for (const auto& ring : geom.at("coordinates")) poly.rings.push_back(parse_ring(ring));
    } else if (type == "MultiPolygon") {
        for (const auto& part : geom.at("coordinates")) {
            for (const auto& ring : part) poly.rings.push_back(parse_ring(ring));
        }
    } else if (type == "GeometryCollection") {
        for (const auto& g : geom.at("geometries")) collect_geometry(g, poly);
    } else {
        throw SchemaError("unsupported GeoJSON geometry type '" + type + "'");
    }
}

json parse_file(const std::filesystem::path& path) {
    json doc;
    try {
        doc = json::parse(read_text_file(path));
    } catch (const json::parse_error& e) {
        throw SchemaError("malformed GeoJSON in " + path.string() + ": " + e.what());
    }
    return doc;
}

std::string feature_name(const json& feature) {
    const auto props = feature.find("properties");
    if (props != feature.end() && props->is_object()) {
        for (const char* key : {"name", "NAME", "Name"}) {
            const auto it = props->find(key);
            if (it != props->end() && it->is_string()) return it->get<std::string>();
        }
    }
    return "";
}

} // namespace

RegionPolygon read_geojson_polygon(const std::filesystem::path& path) {
    const json doc = parse_file(path);
    RegionPolygon poly;
    const std::string type = doc.value("type", "");
    if (type == "FeatureCollection") {
        for (const auto& feature : doc.at("features")) {
            collect_geometry(feature.at("geometry"), poly);
        }
    } else if (type == "Feature") {
        collect_geometry(doc.at("geometry"), poly);
    } else {
        collect_geometry(doc, poly);
    }
    poly.validate();
    if (poly.rings.empty()) throw SchemaError("no polygon rings in " + path.string());
    return poly;
}

std::vector<NamedRegion> read_geojson_named_regions(const std::filesystem::path& path) {
    const json doc = parse_file(path);
    if (doc.value("type", "") != "FeatureCollection") {
        throw SchemaError("named regions require a FeatureCollection: " + path.string());
    }
    std::vector<NamedRegion> out;
    for (const auto& feature : doc.at("features")) {
        NamedRegion region;
        region.name = feature_name(feature);
        if (region.name.empty()) {
            throw SchemaError("feature without a name property in " + path.string());
        }
        collect_geometry(feature.at("geometry"), region.polygon);
        region.polygon.validate();
        out.push_back(std::move(region));
    }
    return out;
}

} // namespace covermap
