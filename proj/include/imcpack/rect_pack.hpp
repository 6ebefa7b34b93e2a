// rect_pack.hpp — 2D placement of supertile footprints in the D_i x D_o plane.
#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <vector>

namespace imcpack {

// x runs along D_i (width w), y along D_o (height h). No rotation.
struct RectItem {
    std::uint64_t w = 0;
    std::uint64_t h = 0;
};

struct Placement {
    std::uint64_t x = 0;
    std::uint64_t y = 0;

    bool operator==(const Placement&) const = default;
};

struct FreeRect {
    std::uint64_t x, y, w, h;
};

// Maximal-rectangles free-space bookkeeping.
class MaxRectsBin {
public:
    MaxRectsBin(std::uint64_t width, std::uint64_t height);

    struct Score {
        std::uint64_t short_side;
        std::uint64_t long_side;
        std::uint64_t y;
        std::uint64_t x;
        auto operator<=>(const Score&) const = default;
    };

    // Best-short-side-fit position for a w x h item, if any.
    std::optional<std::pair<Placement, Score>> find(std::uint64_t w, std::uint64_t h) const;
    void place(Placement p, std::uint64_t w, std::uint64_t h);

    std::span<const FreeRect> free_rects() const { return free_; }

private:
    void prune();

    std::uint64_t width_;
    std::uint64_t height_;
    std::vector<FreeRect> free_;
};

// Places all items or returns nullopt. Each step places the unplaced item with
// the best short-side fit over all free rectangles; ties go to the lower item
// index. Deterministic for a given input order.
std::optional<std::vector<Placement>> pack_rect_2d(std::span<const RectItem> items, std::uint64_t bin_w,
                                                   std::uint64_t bin_h);

}  // namespace imcpack
