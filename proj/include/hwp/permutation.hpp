#pragma once

#include <string>
#include <vector>

#include "hwp/group.hpp"

namespace hwp {

/// Bijection on the elements of a group, stored as an index map.
class Permutation {
 public:
  explicit Permutation(Group g) : group_(std::move(g)), image_(group_.elements()) {}
  Permutation(Group g, std::vector<Elem> image) : group_(std::move(g)), image_(std::move(image)) {
    if (image_.size() != group_.order()) throw InvalidArgument("permutation size does not match group order");
    if (!is_bijective()) throw InvalidArgument("map is not a bijection of " + group_.descriptor());
  }

  static Permutation translation(const Group& g, Elem d) {
    std::vector<Elem> img(g.order());
    for (Elem a = 0; a < img.size(); ++a) img[a] = g.add(a, d);
    return Permutation(g, std::move(img));
  }

  const Group& group() const { return group_; }
  const std::vector<Elem>& image() const { return image_; }
  Elem operator()(Elem a) const { return image_.at(a); }

  Permutation inverse() const {
    std::vector<Elem> inv(image_.size());
    for (Elem a = 0; a < image_.size(); ++a) inv[image_[a]] = a;
    return Permutation(group_, std::move(inv));
  }

  std::vector<Elem> fixed_points() const {
    std::vector<Elem> out;
    for (Elem a = 0; a < image_.size(); ++a)
      if (image_[a] == a) out.push_back(a);
    return out;
  }

  friend bool operator==(const Permutation& a, const Permutation& b) {
    return a.group_ == b.group_ && a.image_ == b.image_;
  }

 private:
  bool is_bijective() const {
    std::vector<char> seen(image_.size(), 0);
    for (Elem b : image_) {
      if (b >= image_.size() || seen[b]) return false;
      seen[b] = 1;
    }
    return true;
  }

  Group group_;
  std::vector<Elem> image_;
};

}  // namespace hwp
