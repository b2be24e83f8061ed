#pragma once

#include <functional>
#include <vector>

#include "hbl/certificate.hpp"
#include "support.hpp"

namespace hbl::test {

inline void collect_nodes(Certificate& c, std::vector<Certificate*>& out) {
  out.push_back(&c);
  for (auto& ch : c.children) collect_nodes(ch, out);
}

/// One random local edit of a certificate. Always changes the serialized form.
inline Certificate mutate(const Certificate& original, Rng& rng) {
  for (;;) {
    Certificate c = original;
    std::vector<Certificate*> nodes;
    collect_nodes(c, nodes);
    Certificate& node = *nodes[rng.integer(0, static_cast<long>(nodes.size()) - 1)];
    BLDatum& d = node.datum;
    switch (rng.integer(0, 8)) {
      case 0: {  // exponent
        Rat& t = d.t[rng.integer(0, static_cast<long>(d.m()) - 1)];
        t += Rat(rng.integer(1, 6) * (rng.integer(0, 1) ? 1 : -1), 7);
        t.canonicalize();
        break;
      }
      case 1: {  // map entry
        Factor& f = d.factors[rng.integer(0, static_cast<long>(d.m()) - 1)];
        f.map(rng.integer(0, static_cast<long>(f.map.rows()) - 1), rng.integer(0, static_cast<long>(f.map.cols()) - 1)) +=
            rng.integer(1, 3);
        break;
      }
      case 2:  // split subspace
        if (node.W) node.W = rng.subspace(node.W->ambient_dim());
        break;
      case 3:  // weight
        if (!node.weights.empty()) {
          Rat& w = node.weights[rng.integer(0, static_cast<long>(node.weights.size()) - 1)];
          w += Rat(rng.integer(-2, 2), 9);
          w.canonicalize();
        }
        break;
      case 4: {  // kind
        auto k = static_cast<Certificate::Kind>(rng.integer(0, 4));
        // On Q with one factor at t = 1 both base rules hold; relabeling is not a forgery.
        bool base_pair = (k == Certificate::Kind::HolderBase || k == Certificate::Kind::InvertibleBase) &&
                         (node.kind == Certificate::Kind::HolderBase || node.kind == Certificate::Kind::InvertibleBase);
        if (base_pair && d.n == 1 && d.m() == 1) continue;
        node.kind = k;
        break;
      }
      case 5:  // drop a child
        if (!node.children.empty()) node.children.erase(node.children.begin() + rng.integer(0, static_cast<long>(node.children.size()) - 1));
        break;
      case 6:  // duplicate a child
        if (!node.children.empty()) {
          node.children.push_back(node.children[rng.integer(0, static_cast<long>(node.children.size()) - 1)]);
          if (!node.weights.empty()) node.weights.push_back(Rat(0));
        }
        break;
      case 7:  // dropped index
        node.dropped = rng.integer(0, static_cast<long>(d.m()));
        break;
      case 8:  // swap split children
        if (node.children.size() == 2) std::swap(node.children[0], node.children[1]);
        break;
    }
    if (certificate_to_json(c) != certificate_to_json(original)) return c;
  }
}

}  // namespace hbl::test
