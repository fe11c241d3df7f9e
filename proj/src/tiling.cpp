/*
 * Copyright 2026 The retpim Authors
 *
 * Licensed under the Apache License, Version 2.0 (the "License");
 * you may not use this file except in compliance with the License.
 * You may obtain a copy of the License at
 *
 * http://www.apache.org/licenses/LICENSE-2.0
 *
 * Unless required by applicable law or agreed to in writing, software
 * distributed under the License is distributed on an "AS IS" BASIS,
 * WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
 * See the License for the specific language governing permissions and
 * limitations under the License.
 */

#include "retpim/tiling.hpp"

#include <algorithm>

namespace retpim {

char dim_char(Dim d) {
  switch (d) {
    case Dim::M: return 'm';
    case Dim::N: return 'n';
    case Dim::K: return 'k';
  }
  return '?';
}

std::string LoopOrder::name() const {
  return {dim_char(dims[0]), dim_char(dims[1]), dim_char(dims[2])};
}

LoopOrder LoopOrder::from_name(const std::string& name) {
  for (const auto& o : all_loop_orders()) {
    if (o.name() == name) return o;
  }
  throw std::invalid_argument("not a loop order: " + name);
}

int LoopOrder::level_of(Dim d) const {
  for (int i = 0; i < 3; ++i) {
    if (dims[i] == d) return i;
  }
  return -1;
}

const std::vector<LoopOrder>& all_loop_orders() {
  static const std::vector<LoopOrder> orders = [] {
    std::vector<LoopOrder> out;
    std::string s = "kmn";
    do {
      LoopOrder o;
      for (int i = 0; i < 3; ++i) {
        o.dims[i] = s[i] == 'm' ? Dim::M : s[i] == 'n' ? Dim::N : Dim::K;
      }
      out.push_back(o);
    } while (std::next_permutation(s.begin(), s.end()));
    return out;
  }();
  return orders;
}

std::string TilingScheme::name() const {
  return order.name() + "/" + std::to_string(shape.tm) + "x" + std::to_string(shape.tk) + "x" +
         std::to_string(shape.tn);
}

bool scheme_less(const TilingScheme& a, const TilingScheme& b) {
  const std::string an = a.order.name();
  const std::string bn = b.order.name();
  if (an != bn) return an < bn;
  return a.shape < b.shape;
}

std::int64_t ceil_div(std::int64_t a, std::int64_t b) { return (a + b - 1) / b; }

std::int64_t clipped_extent(std::int64_t dim, std::int64_t tile, std::int64_t index) {
  return std::min(tile, dim - index * tile);
}

std::vector<std::int64_t> tile_candidates(std::int64_t dim, std::int64_t stride) {
  std::vector<std::int64_t> out;
  for (std::int64_t d = 1; d * d <= dim; ++d) {
    if (dim % d != 0) continue;
    out.push_back(d);
    out.push_back(dim / d);
  }
  if (stride > 0) {
    for (std::int64_t t = stride; t <= dim; t += stride) out.push_back(t);
  }
  std::sort(out.begin(), out.end());
  out.erase(std::unique(out.begin(), out.end()), out.end());
  return out;
}

std::int64_t weight_tile_rows(std::int64_t tk, const GemmWorkload& w, const HardwareConfig& h) {
  return h.processing_type == ProcessingType::BitSerial ? tk * w.weight_bits : tk;
}

std::int64_t weight_tile_cols(std::int64_t tn, const GemmWorkload& w, const HardwareConfig& h) {
  return h.processing_type == ProcessingType::BitSerial ? tn : tn * w.weight_bits;
}

bool tile_fits(const TileShape& s, const GemmWorkload& w, const HardwareConfig& h) {
  if (s.tm < 1 || s.tk < 1 || s.tn < 1) return false;
  if (s.tm > w.m_dim || s.tk > w.k_dim || s.tn > w.n_dim) return false;
  if (weight_tile_cols(s.tn, w, h) > h.row_bits()) return false;
  if (weight_tile_rows(s.tk, w, h) > h.subarray_rows) return false;
  const std::int64_t buffer_bits =
      s.tm * s.tk * w.input_bits + s.tm * s.tn * static_cast<std::int64_t>(h.accum_bits);
  return buffer_bits <= h.buffer_bytes * 8;
}

std::int64_t cycles_per_tile(const TileShape& s, const GemmWorkload& w, const HardwareConfig& h) {
  const std::int64_t t = s.tm * w.input_bits * s.tk;
  return h.processing_type == ProcessingType::BitSerial ? t * w.weight_bits : t;
}

TilingScheme make_scheme(const LoopOrder& order, const TileShape& s, const GemmWorkload& w,
                         const HardwareConfig& h) {
  TilingScheme out;
  out.order = order;
  out.shape = s;
  out.trips = {ceil_div(w.m_dim, s.tm), ceil_div(w.k_dim, s.tk), ceil_div(w.n_dim, s.tn)};
  out.cycles_per_tile = cycles_per_tile(s, w, h);
  return out;
}

std::vector<TilingScheme> enumerate_tilings(const GemmWorkload& w, const HardwareConfig& h) {
  if (!tile_fits({1, 1, 1}, w, h)) {
    throw InfeasibleHardware("infeasible hardware: a 1x1x1 tile of '" + w.label +
                             "' does not fit the macro/buffer");
  }
  const auto ms = tile_candidates(w.m_dim, h.tile_stride);
  const auto ks = tile_candidates(w.k_dim, h.tile_stride);
  const auto ns = tile_candidates(w.n_dim, h.tile_stride);

  std::vector<TileShape> shapes;
  for (auto tm : ms) {
    for (auto tk : ks) {
      for (auto tn : ns) {
        const TileShape s{tm, tk, tn};
        if (tile_fits(s, w, h)) shapes.push_back(s);
      }
    }
  }

  std::vector<TilingScheme> out;
  out.reserve(shapes.size() * 6);
  for (const auto& order : all_loop_orders()) {
    for (const auto& s : shapes) out.push_back(make_scheme(order, s, w, h));
  }
  return out;
}

}  // namespace retpim
