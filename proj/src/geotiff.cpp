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

#include "covermap/geotiff.hpp"

#include <algorithm>
#include <cstring>
#include <fstream>
#include <limits>
#include <map>
#include <string>
#include <vector>

#include "covermap/errors.hpp"
#include "covermap/textio.hpp"
#include "covermap/zstream.hpp"

namespace covermap {

namespace {

// TIFF tag ids used here.
enum : std::uint16_t {
    kTagImageWidth = 256,
    kTagImageLength = 257,
    kTagBitsPerSample = 258,
    kTagCompression = 259,
    kTagPhotometric = 262,
    kTagStripOffsets = 273,
    kTagSamplesPerPixel = 277,
    kTagRowsPerStrip = 278,
    kTagStripByteCounts = 279,
    kTagPredictor = 317,
    kTagTileWidth = 322,
    kTagTileLength = 323,
    kTagTileOffsets = 324,
    kTagTileByteCounts = 325,
    kTagSampleFormat = 339,
    kTagModelPixelScale = 33550,
    kTagModelTiepoint = 33922,
    kTagModelTransformation = 34264,
    kTagGeoKeyDirectory = 34735,
    kTagGeoAsciiParams = 34737,
    kTagGdalNodata = 42113,
};

enum : std::uint16_t {
    kTypeByte = 1,
    kTypeAscii = 2,
    kTypeShort = 3,
    kTypeLong = 4,
    kTypeSByte = 6,
    kTypeSShort = 8,
    kTypeSLong = 9,
    kTypeDouble = 12,
};

enum : std::uint16_t {
    kCompressionNone = 1,
    kCompressionDeflate = 8,
    kCompressionDeflateOld = 32946,
};

// GeoKey ids.
enum : std::uint16_t {
    kKeyModelType = 1024,
    kKeyCitation = 1026,
    kKeyGeographicType = 2048,
    kKeyProjectedCSType = 3072,
};

std::size_t type_size(std::uint16_t type) {
    switch (type) {
        case kTypeByte:
        case kTypeAscii:
        case kTypeSByte: return 1;
        case kTypeShort:
        case kTypeSShort: return 2;
        case kTypeLong:
        case kTypeSLong: return 4;
        case kTypeDouble: return 8;
        default: return 0;
    }
}

// ---- reader ----

class TiffReader {
public:
    TiffReader(std::vector<std::uint8_t> bytes, std::string path)
        : bytes_(std::move(bytes)), path_(std::move(path)) {}

    std::uint16_t u16(std::size_t off) const {
        check(off, 2);
        return static_cast<std::uint16_t>(bytes_[off] | (bytes_[off + 1] << 8));
    }
    std::uint32_t u32(std::size_t off) const {
        check(off, 4);
        return static_cast<std::uint32_t>(bytes_[off]) | (std::uint32_t(bytes_[off + 1]) << 8) |
               (std::uint32_t(bytes_[off + 2]) << 16) | (std::uint32_t(bytes_[off + 3]) << 24);
    }
    double f64(std::size_t off) const {
        check(off, 8);
        std::uint64_t bits = 0;
        for (int i = 7; i >= 0; --i) bits = (bits << 8) | bytes_[off + i];
        double v;
        std::memcpy(&v, &bits, 8);
        return v;
    }
    const std::uint8_t* data(std::size_t off, std::size_t len) const {
        check(off, len);
        return bytes_.data() + off;
    }
    std::size_t size() const { return bytes_.size(); }
    const std::string& path() const { return path_; }

private:
    void check(std::size_t off, std::size_t len) const {
        if (off + len > bytes_.size() || off + len < off) {
            throw IoError("truncated TIFF file: " + path_);
        }
    }

    std::vector<std::uint8_t> bytes_;
    std::string path_;
};

struct IfdEntry {
    std::uint16_t type = 0;
    std::uint32_t count = 0;
    std::size_t data_offset = 0; // absolute offset of the value bytes
};

using Ifd = std::map<std::uint16_t, IfdEntry>;

Ifd parse_ifd(const TiffReader& r, std::size_t ifd_offset, std::size_t entry_value_base) {
    Ifd ifd;
    const std::uint16_t n = r.u16(ifd_offset);
    for (std::uint16_t i = 0; i < n; ++i) {
        const std::size_t e = ifd_offset + 2 + std::size_t(i) * 12;
        const std::uint16_t tag = r.u16(e);
        IfdEntry entry;
        entry.type = r.u16(e + 2);
        entry.count = r.u32(e + 4);
        const std::size_t bytes = type_size(entry.type) * entry.count;
        entry.data_offset = bytes <= 4 ? e + 8 : r.u32(e + 8) + entry_value_base;
        ifd[tag] = entry;
    }
    return ifd;
}

std::vector<std::uint64_t> tag_uints(const TiffReader& r, const IfdEntry& e) {
    std::vector<std::uint64_t> out;
    out.reserve(e.count);
    for (std::uint32_t i = 0; i < e.count; ++i) {
        const std::size_t off = e.data_offset + i * type_size(e.type);
        switch (e.type) {
            case kTypeByte: out.push_back(*r.data(off, 1)); break;
            case kTypeShort: out.push_back(r.u16(off)); break;
            case kTypeLong: out.push_back(r.u32(off)); break;
            default: throw IoError("unexpected TIFF tag type " + std::to_string(e.type));
        }
    }
    return out;
}

std::uint64_t tag_uint(const TiffReader& r, const IfdEntry& e) {
    return tag_uints(r, e)[0];
}

std::vector<double> tag_doubles(const TiffReader& r, const IfdEntry& e) {
    if (e.type != kTypeDouble) throw IoError("expected DOUBLE TIFF tag");
    std::vector<double> out;
    out.reserve(e.count);
    for (std::uint32_t i = 0; i < e.count; ++i) out.push_back(r.f64(e.data_offset + i * 8));
    return out;
}

std::string tag_ascii(const TiffReader& r, const IfdEntry& e) {
    const std::uint8_t* p = r.data(e.data_offset, e.count);
    std::string s(reinterpret_cast<const char*>(p), e.count);
    while (!s.empty() && (s.back() == '\0' || s.back() == ' ')) s.pop_back();
    return s;
}

std::optional<const IfdEntry*> find(const Ifd& ifd, std::uint16_t tag) {
    const auto it = ifd.find(tag);
    if (it == ifd.end()) return std::nullopt;
    return &it->second;
}

const IfdEntry& require(const Ifd& ifd, std::uint16_t tag, const char* what,
                        const std::string& path) {
    const auto it = ifd.find(tag);
    if (it == ifd.end()) throw IoError(std::string("missing ") + what + " in " + path);
    return it->second;
}

// Converts one row of packed little-endian samples into int32.
void convert_row(const std::uint8_t* src, std::int32_t* dst, std::size_t n, int bits,
                 bool is_signed) {
    switch (bits) {
        case 8:
            for (std::size_t i = 0; i < n; ++i) {
                dst[i] = is_signed ? static_cast<std::int32_t>(static_cast<std::int8_t>(src[i]))
                                   : static_cast<std::int32_t>(src[i]);
            }
            break;
        case 16:
            for (std::size_t i = 0; i < n; ++i) {
                const std::uint16_t v =
                    static_cast<std::uint16_t>(src[2 * i] | (src[2 * i + 1] << 8));
                dst[i] = is_signed ? static_cast<std::int32_t>(static_cast<std::int16_t>(v))
                                   : static_cast<std::int32_t>(v);
            }
            break;
        case 32:
            for (std::size_t i = 0; i < n; ++i) {
                const std::uint32_t v = static_cast<std::uint32_t>(src[4 * i]) |
                                        (std::uint32_t(src[4 * i + 1]) << 8) |
                                        (std::uint32_t(src[4 * i + 2]) << 16) |
                                        (std::uint32_t(src[4 * i + 3]) << 24);
                if (!is_signed && v > static_cast<std::uint32_t>(std::numeric_limits<std::int32_t>::max())) {
                    throw IoError("uint32 sample does not fit the int32 class-code range");
                }
                dst[i] = static_cast<std::int32_t>(v);
            }
            break;
        default:
            throw IoError("unsupported BitsPerSample: " + std::to_string(bits));
    }
}

std::vector<std::uint8_t> read_block(const TiffReader& r, std::uint64_t offset,
                                     std::uint64_t byte_count, std::uint16_t compression,
                                     std::size_t raw_size) {
    const std::uint8_t* p = r.data(offset, byte_count);
    if (compression == kCompressionNone) {
        if (byte_count < raw_size) throw IoError("short TIFF block in " + r.path());
        return std::vector<std::uint8_t>(p, p + raw_size);
    }
    return zlib_inflate(std::span<const std::uint8_t>(p, byte_count), raw_size);
}

std::string crs_from_geokeys(const TiffReader& r, const Ifd& ifd) {
    const auto dir = find(ifd, kTagGeoKeyDirectory);
    if (!dir) return "";
    const auto keys = tag_uints(r, **dir);
    if (keys.size() < 4) return "";
    std::string ascii;
    if (const auto params = find(ifd, kTagGeoAsciiParams)) {
        const std::uint8_t* p = r.data((*params)->data_offset, (*params)->count);
        ascii.assign(reinterpret_cast<const char*>(p), (*params)->count);
    }
    const std::uint64_t n_keys = keys[3];
    std::string citation;
    std::string epsg;
    for (std::uint64_t k = 1; k + 1 <= n_keys && 4 * (k + 1) <= keys.size(); ++k) {
        const std::uint64_t key = keys[4 * k];
        const std::uint64_t loc = keys[4 * k + 1];
        const std::uint64_t count = keys[4 * k + 2];
        const std::uint64_t value = keys[4 * k + 3];
        if (key == kKeyCitation && loc == kTagGeoAsciiParams) {
            if (value + count <= ascii.size()) {
                citation = ascii.substr(value, count);
                while (!citation.empty() && (citation.back() == '|' || citation.back() == '\0')) {
                    citation.pop_back();
                }
            }
        } else if ((key == kKeyProjectedCSType || key == kKeyGeographicType) && loc == 0) {
            if (value != 32767 && value != 0) epsg = "EPSG:" + std::to_string(value);
        }
    }
    return citation.empty() ? epsg : citation;
}

} // namespace

CategoricalRaster read_geotiff(const std::filesystem::path& path,
                               std::optional<std::int32_t> default_nodata) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw IoError("cannot open GeoTIFF: " + path.string());
    std::vector<std::uint8_t> bytes((std::istreambuf_iterator<char>(in)),
                                    std::istreambuf_iterator<char>());
    const TiffReader r(std::move(bytes), path.string());

    if (r.size() < 8) throw IoError("not a TIFF file: " + path.string());
    if (r.data(0, 2)[0] != 'I' || r.data(0, 2)[1] != 'I') {
        throw IoError("big-endian TIFF is not supported: " + path.string());
    }
    const std::uint16_t magic = r.u16(2);
    if (magic == 43) throw IoError("BigTIFF is not supported: " + path.string());
    if (magic != 42) throw IoError("not a TIFF file: " + path.string());
    const Ifd ifd = parse_ifd(r, r.u32(4), 0);

    const std::uint64_t width = tag_uint(r, require(ifd, kTagImageWidth, "ImageWidth", r.path()));
    const std::uint64_t height = tag_uint(r, require(ifd, kTagImageLength, "ImageLength", r.path()));
    if (width == 0 || height == 0) throw IoError("empty image in " + path.string());

    std::uint64_t samples = 1;
    if (const auto e = find(ifd, kTagSamplesPerPixel)) samples = tag_uint(r, **e);
    if (samples != 1) throw IoError("unsupported band count (" + std::to_string(samples) +
                                    ") in " + path.string());

    std::uint64_t bits = 1;
    if (const auto e = find(ifd, kTagBitsPerSample)) bits = tag_uint(r, **e);
    std::uint64_t sample_format = 1;
    if (const auto e = find(ifd, kTagSampleFormat)) sample_format = tag_uint(r, **e);
    if (sample_format != 1 && sample_format != 2) {
        throw IoError("non-integer band (SampleFormat " + std::to_string(sample_format) +
                      ") in " + path.string());
    }
    const bool is_signed = sample_format == 2;

    std::uint16_t compression = kCompressionNone;
    if (const auto e = find(ifd, kTagCompression)) {
        compression = static_cast<std::uint16_t>(tag_uint(r, **e));
    }
    if (compression == kCompressionDeflateOld) compression = kCompressionDeflate;
    if (compression != kCompressionNone && compression != kCompressionDeflate) {
        throw IoError("unsupported TIFF compression " + std::to_string(compression) + " in " +
                      path.string());
    }
    if (const auto e = find(ifd, kTagPredictor)) {
        if (tag_uint(r, **e) != 1) throw IoError("TIFF predictor is not supported: " + path.string());
    }

    const std::size_t bytes_per_sample = static_cast<std::size_t>(bits) / 8;
    if (bits != 8 && bits != 16 && bits != 32) {
        throw IoError("unsupported BitsPerSample " + std::to_string(bits) + " in " + path.string());
    }

    CategoricalRaster out;
    out.grid.width = static_cast<int>(width);
    out.grid.height = static_cast<int>(height);
    out.values.resize(width * height);

    const bool tiled = ifd.count(kTagTileOffsets) > 0;
    if (tiled) {
        const std::uint64_t tw = tag_uint(r, require(ifd, kTagTileWidth, "TileWidth", r.path()));
        const std::uint64_t th = tag_uint(r, require(ifd, kTagTileLength, "TileLength", r.path()));
        const auto offsets = tag_uints(r, require(ifd, kTagTileOffsets, "TileOffsets", r.path()));
        const auto counts =
            tag_uints(r, require(ifd, kTagTileByteCounts, "TileByteCounts", r.path()));
        const std::uint64_t across = (width + tw - 1) / tw;
        const std::uint64_t down = (height + th - 1) / th;
        if (offsets.size() < across * down || counts.size() < across * down) {
            throw IoError("tile index shorter than tile grid in " + path.string());
        }
        const std::size_t raw = static_cast<std::size_t>(tw) * th * bytes_per_sample;
        for (std::uint64_t ty = 0; ty < down; ++ty) {
            for (std::uint64_t tx = 0; tx < across; ++tx) {
                const std::uint64_t idx = ty * across + tx;
                const auto block = read_block(r, offsets[idx], counts[idx], compression, raw);
                const std::uint64_t rows = std::min<std::uint64_t>(th, height - ty * th);
                const std::uint64_t cols = std::min<std::uint64_t>(tw, width - tx * tw);
                for (std::uint64_t row = 0; row < rows; ++row) {
                    convert_row(block.data() + row * tw * bytes_per_sample,
                                out.values.data() + (ty * th + row) * width + tx * tw,
                                cols, static_cast<int>(bits), is_signed);
                }
            }
        }
    } else {
        const auto offsets = tag_uints(r, require(ifd, kTagStripOffsets, "StripOffsets", r.path()));
        const auto counts =
            tag_uints(r, require(ifd, kTagStripByteCounts, "StripByteCounts", r.path()));
        std::uint64_t rps = height;
        if (const auto e = find(ifd, kTagRowsPerStrip)) rps = std::min(tag_uint(r, **e), height);
        if (rps == 0) throw IoError("RowsPerStrip is zero in " + path.string());
        const std::uint64_t n_strips = (height + rps - 1) / rps;
        if (offsets.size() < n_strips || counts.size() < n_strips) {
            throw IoError("strip index shorter than strip count in " + path.string());
        }
        for (std::uint64_t s = 0; s < n_strips; ++s) {
            const std::uint64_t rows = std::min(rps, height - s * rps);
            const std::size_t raw = static_cast<std::size_t>(rows) * width * bytes_per_sample;
            const auto block = read_block(r, offsets[s], counts[s], compression, raw);
            convert_row(block.data(), out.values.data() + s * rps * width,
                        static_cast<std::size_t>(rows) * width, static_cast<int>(bits), is_signed);
        }
    }

    // Geotransform.
    const auto scale_tag = find(ifd, kTagModelPixelScale);
    const auto tiepoint_tag = find(ifd, kTagModelTiepoint);
    const auto transform_tag = find(ifd, kTagModelTransformation);
    if (scale_tag && tiepoint_tag) {
        const auto scale = tag_doubles(r, **scale_tag);
        const auto tie = tag_doubles(r, **tiepoint_tag);
        if (scale.size() < 2 || tie.size() < 6) {
            throw IoError("malformed geotransform tags in " + path.string());
        }
        out.grid.pixel_w = scale[0];
        out.grid.pixel_h = std::abs(scale[1]);
        out.grid.origin_x = tie[3] - tie[0] * scale[0];
        out.grid.origin_y = tie[4] + tie[1] * std::abs(scale[1]);
    } else if (transform_tag) {
        const auto m = tag_doubles(r, **transform_tag);
        if (m.size() < 16 || m[1] != 0 || m[4] != 0) {
            throw IoError("rotated geotransform is not supported: " + path.string());
        }
        out.grid.pixel_w = m[0];
        out.grid.pixel_h = std::abs(m[5]);
        out.grid.origin_x = m[3];
        out.grid.origin_y = m[7];
    } else {
        throw IoError("missing geotransform in " + path.string());
    }

    out.grid.crs_id = crs_from_geokeys(r, ifd);

    if (const auto e = find(ifd, kTagGdalNodata)) {
        const std::string text = tag_ascii(r, **e);
        try {
            out.nodata = static_cast<std::int32_t>(parse_int(text));
        } catch (const SchemaError&) {
            throw IoError("malformed nodata value '" + text + "' in " + path.string());
        }
    } else if (default_nodata) {
        out.nodata = *default_nodata;
    } else {
        out.nodata = std::numeric_limits<std::int32_t>::min();
    }

    out.grid.validate();
    return out;
}

// ---- writer ----

namespace {

class TiffBuilder {
public:
    void put_u16(std::uint16_t v) {
        bytes_.push_back(static_cast<std::uint8_t>(v));
        bytes_.push_back(static_cast<std::uint8_t>(v >> 8));
    }
    void put_u32(std::uint32_t v) {
        for (int i = 0; i < 4; ++i) bytes_.push_back(static_cast<std::uint8_t>(v >> (8 * i)));
    }
    void put_f64(double v) {
        std::uint64_t bits;
        std::memcpy(&bits, &v, 8);
        for (int i = 0; i < 8; ++i) bytes_.push_back(static_cast<std::uint8_t>(bits >> (8 * i)));
    }
    void put_bytes(const std::uint8_t* p, std::size_t n) { bytes_.insert(bytes_.end(), p, p + n); }
    std::size_t size() const { return bytes_.size(); }
    const std::vector<std::uint8_t>& bytes() const { return bytes_; }

private:
    std::vector<std::uint8_t> bytes_;
};

struct TagValue {
    std::uint16_t tag;
    std::uint16_t type;
    std::uint32_t count;
    std::vector<std::uint8_t> payload; // little-endian packed values
};

TagValue make_short_tag(std::uint16_t tag, std::vector<std::uint16_t> values) {
    TagValue t{tag, kTypeShort, static_cast<std::uint32_t>(values.size()), {}};
    for (const std::uint16_t v : values) {
        t.payload.push_back(static_cast<std::uint8_t>(v));
        t.payload.push_back(static_cast<std::uint8_t>(v >> 8));
    }
    return t;
}

TagValue make_long_tag(std::uint16_t tag, std::vector<std::uint32_t> values) {
    TagValue t{tag, kTypeLong, static_cast<std::uint32_t>(values.size()), {}};
    for (const std::uint32_t v : values) {
        for (int i = 0; i < 4; ++i) t.payload.push_back(static_cast<std::uint8_t>(v >> (8 * i)));
    }
    return t;
}

TagValue make_double_tag(std::uint16_t tag, std::vector<double> values) {
    TagValue t{tag, kTypeDouble, static_cast<std::uint32_t>(values.size()), {}};
    for (const double v : values) {
        std::uint64_t bits;
        std::memcpy(&bits, &v, 8);
        for (int i = 0; i < 8; ++i) t.payload.push_back(static_cast<std::uint8_t>(bits >> (8 * i)));
    }
    return t;
}

TagValue make_ascii_tag(std::uint16_t tag, const std::string& text) {
    TagValue t{tag, kTypeAscii, static_cast<std::uint32_t>(text.size() + 1), {}};
    t.payload.assign(text.begin(), text.end());
    t.payload.push_back(0);
    return t;
}

struct SampleLayout {
    int bits;
    bool is_signed;
};

SampleLayout pick_layout(std::int32_t min_v, std::int32_t max_v) {
    if (min_v >= 0 && max_v <= 255) return {8, false};
    if (min_v >= 0 && max_v <= 65535) return {16, false};
    if (min_v >= -128 && max_v <= 127) return {8, true};
    if (min_v >= -32768 && max_v <= 32767) return {16, true};
    return {32, true};
}

void pack_samples(const std::int32_t* src, std::uint8_t* dst, std::size_t n, int bits) {
    switch (bits) {
        case 8:
            for (std::size_t i = 0; i < n; ++i) dst[i] = static_cast<std::uint8_t>(src[i]);
            break;
        case 16:
            for (std::size_t i = 0; i < n; ++i) {
                dst[2 * i] = static_cast<std::uint8_t>(src[i]);
                dst[2 * i + 1] = static_cast<std::uint8_t>(src[i] >> 8);
            }
            break;
        default:
            for (std::size_t i = 0; i < n; ++i) {
                for (int b = 0; b < 4; ++b) {
                    dst[4 * i + b] = static_cast<std::uint8_t>(src[i] >> (8 * b));
                }
            }
            break;
    }
}

void write_tiff(const GridSpec& grid, const std::int32_t* values, std::int32_t nodata,
                const std::filesystem::path& path, const GeoTiffOptions& options) {
    grid.validate();
    std::int32_t min_v = nodata, max_v = nodata;
    const std::size_t n = grid.cell_count();
    for (std::size_t i = 0; i < n; ++i) {
        min_v = std::min(min_v, values[i]);
        max_v = std::max(max_v, values[i]);
    }
    const SampleLayout layout = pick_layout(min_v, max_v);
    const std::size_t bytes_per_sample = static_cast<std::size_t>(layout.bits) / 8;

    const int rps = std::clamp(options.rows_per_strip, 1, grid.height);
    const std::size_t n_strips = (static_cast<std::size_t>(grid.height) + rps - 1) / rps;

    // Encode strips up front so their sizes are known before the IFD.
    std::vector<std::vector<std::uint8_t>> strips(n_strips);
    std::vector<std::uint8_t> raw;
    for (std::size_t s = 0; s < n_strips; ++s) {
        const std::size_t row0 = s * rps;
        const std::size_t rows = std::min<std::size_t>(rps, grid.height - row0);
        const std::size_t count = rows * grid.width;
        raw.resize(count * bytes_per_sample);
        pack_samples(values + row0 * grid.width, raw.data(), count, layout.bits);
        if (options.compression == TiffCompression::Deflate) {
            strips[s] = zlib_deflate(raw);
        } else {
            strips[s] = raw;
        }
    }

    std::vector<TagValue> tags;
    tags.push_back(make_long_tag(kTagImageWidth, {static_cast<std::uint32_t>(grid.width)}));
    tags.push_back(make_long_tag(kTagImageLength, {static_cast<std::uint32_t>(grid.height)}));
    tags.push_back(make_short_tag(kTagBitsPerSample, {static_cast<std::uint16_t>(layout.bits)}));
    tags.push_back(make_short_tag(
        kTagCompression,
        {options.compression == TiffCompression::Deflate ? std::uint16_t(kCompressionDeflate)
                                                         : std::uint16_t(kCompressionNone)}));
    tags.push_back(make_short_tag(kTagPhotometric, {1}));
    tags.push_back(make_long_tag(kTagStripOffsets,
                                 std::vector<std::uint32_t>(n_strips, 0))); // patched below
    tags.push_back(make_short_tag(kTagSamplesPerPixel, {1}));
    tags.push_back(make_long_tag(kTagRowsPerStrip, {static_cast<std::uint32_t>(rps)}));
    {
        std::vector<std::uint32_t> counts(n_strips);
        for (std::size_t s = 0; s < n_strips; ++s) {
            counts[s] = static_cast<std::uint32_t>(strips[s].size());
        }
        tags.push_back(make_long_tag(kTagStripByteCounts, std::move(counts)));
    }
    tags.push_back(make_short_tag(kTagSampleFormat, {layout.is_signed ? std::uint16_t(2)
                                                                      : std::uint16_t(1)}));
    tags.push_back(make_double_tag(kTagModelPixelScale, {grid.pixel_w, grid.pixel_h, 0.0}));
    tags.push_back(
        make_double_tag(kTagModelTiepoint, {0, 0, 0, grid.origin_x, grid.origin_y, 0}));

    if (!grid.crs_id.empty()) {
        // Citation carries the opaque crs_id; a parseable EPSG code is also
        // written as the matching numeric key for external readers.
        std::vector<std::uint16_t> keys;
        std::uint16_t epsg_key = 0, epsg_code = 0;
        if (grid.crs_id.rfind("EPSG:", 0) == 0) {
            const long code = std::strtol(grid.crs_id.c_str() + 5, nullptr, 10);
            if (code > 0 && code < 65535) {
                epsg_code = static_cast<std::uint16_t>(code);
                epsg_key = (code >= 4000 && code < 5000) ? kKeyGeographicType : kKeyProjectedCSType;
            }
        }
        const std::string ascii = grid.crs_id + "|";
        const std::uint16_t n_keys = epsg_key ? 2 : 1;
        keys = {1, 1, 0, n_keys,
                kKeyCitation, kTagGeoAsciiParams, static_cast<std::uint16_t>(ascii.size()), 0};
        if (epsg_key) {
            keys.insert(keys.end(), {epsg_key, 0, 1, epsg_code});
        }
        tags.push_back(make_short_tag(kTagGeoKeyDirectory, std::move(keys)));
        tags.push_back(make_ascii_tag(kTagGeoAsciiParams, ascii));
    }
    tags.push_back(make_ascii_tag(kTagGdalNodata, std::to_string(nodata)));

    // Layout: header, IFD, overflow payloads, strip data.
    const std::size_t ifd_offset = 8;
    const std::size_t ifd_size = 2 + tags.size() * 12 + 4;
    std::size_t overflow_offset = ifd_offset + ifd_size;
    std::size_t overflow_size = 0;
    for (const TagValue& t : tags) {
        if (t.payload.size() > 4) overflow_size += (t.payload.size() + 1) & ~std::size_t(1);
    }
    std::size_t strip_offset = overflow_offset + overflow_size;
    {
        std::vector<std::uint32_t> offsets(n_strips);
        std::size_t pos = strip_offset;
        for (std::size_t s = 0; s < n_strips; ++s) {
            offsets[s] = static_cast<std::uint32_t>(pos);
            pos += strips[s].size();
        }
        for (TagValue& t : tags) {
            if (t.tag == kTagStripOffsets) {
                t = make_long_tag(kTagStripOffsets, std::move(offsets));
                break;
            }
        }
    }

    TiffBuilder out;
    out.put_u16(0x4949); // "II"
    out.put_u16(42);
    out.put_u32(static_cast<std::uint32_t>(ifd_offset));
    out.put_u16(static_cast<std::uint16_t>(tags.size()));
    std::size_t cursor = overflow_offset;
    for (const TagValue& t : tags) {
        out.put_u16(t.tag);
        out.put_u16(t.type);
        out.put_u32(t.count);
        if (t.payload.size() <= 4) {
            std::uint8_t inline_bytes[4] = {0, 0, 0, 0};
            std::copy(t.payload.begin(), t.payload.end(), inline_bytes);
            out.put_bytes(inline_bytes, 4);
        } else {
            out.put_u32(static_cast<std::uint32_t>(cursor));
            cursor += (t.payload.size() + 1) & ~std::size_t(1);
        }
    }
    out.put_u32(0); // no next IFD
    for (const TagValue& t : tags) {
        if (t.payload.size() > 4) {
            out.put_bytes(t.payload.data(), t.payload.size());
            if (t.payload.size() & 1) {
                const std::uint8_t pad = 0;
                out.put_bytes(&pad, 1);
            }
        }
    }
    for (const auto& strip : strips) out.put_bytes(strip.data(), strip.size());

    std::ofstream file(path, std::ios::binary | std::ios::trunc);
    if (!file) throw IoError("cannot write GeoTIFF: " + path.string());
    file.write(reinterpret_cast<const char*>(out.bytes().data()),
               static_cast<std::streamsize>(out.size()));
    if (!file) throw IoError("short write to " + path.string());
}

} // namespace

void write_geotiff(const CategoricalRaster& raster, const std::filesystem::path& path,
                   const GeoTiffOptions& options) {
    raster.validate();
    write_tiff(raster.grid, raster.values.data(), raster.nodata, path, options);
}

void write_geotiff(const BinaryMask& mask, const std::filesystem::path& path,
                   const GeoTiffOptions& options) {
    std::vector<std::int32_t> widened(mask.values.size());
    for (std::size_t i = 0; i < mask.values.size(); ++i) widened[i] = mask.values[i];
    write_tiff(mask.grid, widened.data(), mask.nodata, path, options);
}

} // namespace covermap
