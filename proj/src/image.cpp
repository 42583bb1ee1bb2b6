#include "facet/image.hpp"

#include <cctype>
#include <fstream>
#include <string>

#include "facet/error.hpp"

namespace facet {

ImagePatch::ImagePatch(int width, int height, std::vector<std::uint8_t> pixels)
    : width_(width), height_(height), pixels_(std::move(pixels)) {
    if (width_ <= 0 || height_ <= 0) throw Error(ErrorKind::Data, "image dimensions must be positive");
    if (pixels_.size() != 3 * pixel_count()) {
        throw Error(ErrorKind::Data, "pixel buffer has " + std::to_string(pixels_.size()) + " bytes, expected " +
                                         std::to_string(3 * pixel_count()));
    }
}

ImagePatch ImagePatch::filled(int width, int height, std::uint8_t r, std::uint8_t g, std::uint8_t b) {
    std::vector<std::uint8_t> px;
    px.reserve(3 * static_cast<std::size_t>(std::max(width, 0)) * static_cast<std::size_t>(std::max(height, 0)));
    for (long i = 0; i < static_cast<long>(width) * height; ++i) {
        px.push_back(r);
        px.push_back(g);
        px.push_back(b);
    }
    return ImagePatch(width, height, std::move(px));
}

ImagePatch ImagePatch::crop(int x, int y, int w, int h) const {
    if (w <= 0 || h <= 0 || x < 0 || y < 0 || x + w > width_ || y + h > height_) {
        throw Error(ErrorKind::Bound, "crop rectangle outside image");
    }
    std::vector<std::uint8_t> px;
    px.reserve(3 * static_cast<std::size_t>(w) * h);
    for (int row = y; row < y + h; ++row) {
        const auto* src = at(x, row);
        px.insert(px.end(), src, src + 3 * w);
    }
    return ImagePatch(w, h, std::move(px));
}

namespace {

// Next whitespace-delimited header token, skipping '#' comments.
std::string ppm_token(std::istream& in) {
    std::string token;
    int c = in.get();
    for (;;) {
        while (c != EOF && std::isspace(c)) c = in.get();
        if (c == '#') {
            while (c != EOF && c != '\n') c = in.get();
            continue;
        }
        break;
    }
    while (c != EOF && !std::isspace(c)) {
        token.push_back(static_cast<char>(c));
        c = in.get();
    }
    // `c` is the single whitespace byte that terminates the token
    return token;
}

int ppm_int(std::istream& in, const char* what) {
    const std::string token = ppm_token(in);
    try {
        std::size_t used = 0;
        const int v = std::stoi(token, &used);
        if (used == token.size()) return v;
    } catch (const std::exception&) {
    }
    throw Error(ErrorKind::Format, std::string("PPM: bad ") + what + " '" + token + "'");
}

}  // namespace

ImagePatch read_ppm(std::istream& in) {
    if (ppm_token(in) != "P6") throw Error(ErrorKind::Format, "PPM: expected P6 magic");
    const int width = ppm_int(in, "width");
    const int height = ppm_int(in, "height");
    const int maxval = ppm_int(in, "maxval");
    if (maxval != 255) throw Error(ErrorKind::Format, "PPM: only maxval 255 is supported");
    if (width <= 0 || height <= 0 || width > (1 << 15) || height > (1 << 15)) {
        throw Error(ErrorKind::Format, "PPM: bad dimensions");
    }
    std::vector<std::uint8_t> px(3 * static_cast<std::size_t>(width) * height);
    in.read(reinterpret_cast<char*>(px.data()), static_cast<std::streamsize>(px.size()));
    if (static_cast<std::size_t>(in.gcount()) != px.size()) throw Error(ErrorKind::Format, "PPM: truncated pixels");
    return ImagePatch(width, height, std::move(px));
}

ImagePatch load_ppm(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw Error(ErrorKind::Io, "cannot open image " + path.string());
    return read_ppm(in);
}

void write_ppm(const ImagePatch& image, std::ostream& out) {
    out << "P6\n" << image.width() << ' ' << image.height() << "\n255\n";
    out.write(reinterpret_cast<const char*>(image.pixels().data()),
              static_cast<std::streamsize>(image.pixels().size()));
}

void save_ppm(const ImagePatch& image, const std::filesystem::path& path) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw Error(ErrorKind::Io, "cannot write " + path.string());
    write_ppm(image, out);
}

}  // namespace facet
