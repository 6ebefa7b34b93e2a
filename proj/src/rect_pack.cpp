#include "imcpack/rect_pack.hpp"

#include <algorithm>

namespace imcpack {

MaxRectsBin::MaxRectsBin(std::uint64_t width, std::uint64_t height) : width_(width), height_(height) {
    free_.push_back({0, 0, width, height});
}

std::optional<std::pair<Placement, MaxRectsBin::Score>> MaxRectsBin::find(std::uint64_t w,
                                                                          std::uint64_t h) const {
    std::optional<std::pair<Placement, Score>> best;
    for (const auto& f : free_) {
        if (w > f.w || h > f.h) continue;
        const auto dw = f.w - w;
        const auto dh = f.h - h;
        Score s{std::min(dw, dh), std::max(dw, dh), f.y, f.x};
        if (!best || s < best->second) best = {{Placement{f.x, f.y}, s}};
    }
    return best;
}

void MaxRectsBin::place(Placement p, std::uint64_t w, std::uint64_t h) {
    std::vector<FreeRect> next;
    next.reserve(free_.size() + 4);
    const auto px1 = p.x + w;
    const auto py1 = p.y + h;
    for (const auto& f : free_) {
        const auto fx1 = f.x + f.w;
        const auto fy1 = f.y + f.h;
        if (p.x >= fx1 || px1 <= f.x || p.y >= fy1 || py1 <= f.y) {
            next.push_back(f);
            continue;
        }
        if (p.x > f.x) next.push_back({f.x, f.y, p.x - f.x, f.h});
        if (px1 < fx1) next.push_back({px1, f.y, fx1 - px1, f.h});
        if (p.y > f.y) next.push_back({f.x, f.y, f.w, p.y - f.y});
        if (py1 < fy1) next.push_back({f.x, py1, f.w, fy1 - py1});
    }
    free_ = std::move(next);
    prune();
}

void MaxRectsBin::prune() {
    auto contains = [](const FreeRect& a, const FreeRect& b) {
        return b.x >= a.x && b.y >= a.y && b.x + b.w <= a.x + a.w && b.y + b.h <= a.y + a.h;
    };
    std::vector<bool> drop(free_.size(), false);
    for (std::size_t i = 0; i < free_.size(); ++i) {
        if (drop[i]) continue;
        for (std::size_t j = 0; j < free_.size(); ++j) {
            if (i == j || drop[j]) continue;
            if (contains(free_[j], free_[i])) {
                drop[i] = true;
                break;
            }
        }
    }
    std::vector<FreeRect> kept;
    kept.reserve(free_.size());
    for (std::size_t i = 0; i < free_.size(); ++i)
        if (!drop[i]) kept.push_back(free_[i]);
    free_ = std::move(kept);
}

std::optional<std::vector<Placement>> pack_rect_2d(std::span<const RectItem> items, std::uint64_t bin_w,
                                                   std::uint64_t bin_h) {
    std::uint64_t area = 0;
    for (const auto& it : items) {
        if (it.w > bin_w || it.h > bin_h) return std::nullopt;
        area += it.w * it.h;
    }
    if (area > bin_w * bin_h) return std::nullopt;

    MaxRectsBin bin(bin_w, bin_h);
    std::vector<Placement> out(items.size());
    std::vector<bool> placed(items.size(), false);
    for (std::size_t step = 0; step < items.size(); ++step) {
        std::optional<std::size_t> best_item;
        MaxRectsBin::Score best_score{};
        Placement best_pos{};
        for (std::size_t i = 0; i < items.size(); ++i) {
            if (placed[i]) continue;
            auto fit = bin.find(items[i].w, items[i].h);
            if (!fit) continue;
            if (!best_item || fit->second < best_score) {
                best_item = i;
                best_score = fit->second;
                best_pos = fit->first;
            }
        }
        if (!best_item) return std::nullopt;
        bin.place(best_pos, items[*best_item].w, items[*best_item].h);
        out[*best_item] = best_pos;
        placed[*best_item] = true;
    }
    return out;
}

}  // namespace imcpack
