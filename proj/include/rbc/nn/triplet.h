#ifndef RBC_NN_TRIPLET_H_
#define RBC_NN_TRIPLET_H_

#include <Eigen/Dense>

#include <algorithm>
#include <vector>

namespace rbc::nn {

template <typename T>
struct TripletTerms {
  T loss;
  T d_pos;
  T d_neg;
};

// max(d_p - d_n + margin, 0) with Euclidean d. Gradients (if requested) are
// written for anchor, positive and negative; a zero-length difference
// contributes a zero subgradient.
template <typename T, typename Vec>
TripletTerms<T> TripletLoss(const Vec& anchor, const Vec& pos, const Vec& neg,
                            T margin, Eigen::Matrix<T, Eigen::Dynamic, 1>* g_anchor = nullptr,
                            Eigen::Matrix<T, Eigen::Dynamic, 1>* g_pos = nullptr,
                            Eigen::Matrix<T, Eigen::Dynamic, 1>* g_neg = nullptr) {
  using V = Eigen::Matrix<T, Eigen::Dynamic, 1>;
  const V dp_vec = anchor - pos;
  const V dn_vec = anchor - neg;
  const T d_pos = dp_vec.norm();
  const T d_neg = dn_vec.norm();
  const T raw = d_pos - d_neg + margin;
  const T loss = std::max(raw, T(0));
  if (g_anchor || g_pos || g_neg) {
    V up = V::Zero(anchor.size());
    V un = V::Zero(anchor.size());
    if (raw > T(0)) {
      if (d_pos > T(0)) up = dp_vec / d_pos;
      if (d_neg > T(0)) un = dn_vec / d_neg;
    }
    if (g_anchor) *g_anchor = up - un;
    if (g_pos) *g_pos = -up;
    if (g_neg) *g_neg = un;
  }
  return {loss, d_pos, d_neg};
}

// Index of the candidate closest to the anchor (lowest index on ties).
template <typename T>
size_t NearestIndex(const std::vector<T>& distances) {
  return static_cast<size_t>(std::min_element(distances.begin(), distances.end()) -
                             distances.begin());
}

}  // namespace rbc::nn

#endif  // RBC_NN_TRIPLET_H_
