#ifndef FACET_IMAGE_HPP
#define FACET_IMAGE_HPP

#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <vector>

namespace facet {

/// 8-bit RGB raster, row-major, three bytes per pixel.
class ImagePatch {
public:
    ImagePatch() = default;
    /// Throws Data unless width, height > 0 and pixels.size() == 3*width*height.
    ImagePatch(int width, int height, std::vector<std::uint8_t> pixels);
    /// Uniform patch.
    static ImagePatch filled(int width, int height, std::uint8_t r, std::uint8_t g, std::uint8_t b);

    int width() const noexcept { return width_; }
    int height() const noexcept { return height_; }
    std::size_t pixel_count() const noexcept { return static_cast<std::size_t>(width_) * height_; }
    const std::vector<std::uint8_t>& pixels() const noexcept { return pixels_; }

    const std::uint8_t* at(int x, int y) const noexcept {
        return pixels_.data() + 3 * (static_cast<std::size_t>(y) * width_ + x);
    }
    std::uint8_t* at(int x, int y) noexcept { return pixels_.data() + 3 * (static_cast<std::size_t>(y) * width_ + x); }

    /// Sub-rectangle; throws Bound if it leaves the image or is empty.
    ImagePatch crop(int x, int y, int w, int h) const;

    friend bool operator==(const ImagePatch&, const ImagePatch&) = default;

private:
    int width_ = 0;
    int height_ = 0;
    std::vector<std::uint8_t> pixels_;
};

/// Binary PPM (P6, maxval 255) only.
ImagePatch read_ppm(std::istream& in);
ImagePatch load_ppm(const std::filesystem::path& path);
void write_ppm(const ImagePatch& image, std::ostream& out);
void save_ppm(const ImagePatch& image, const std::filesystem::path& path);

}  // namespace facet

#endif
