#include "gmsnp/pcsp.hpp"

#include "gmsnp/errors.hpp"

namespace gmsnp {

namespace {

void check_signatures(const SandwichSpec& spec) {
  const auto& tau = spec.patterns.palette.tau();
  if (!(spec.a.signature() == tau) || !(spec.b.signature() == tau) ||
      !(spec.report.factor.signature() == tau)) {
    throw SignatureMismatch("sandwich: a, b and the patterns must share one signature");
  }
}

}  // namespace

SandwichCheck sandwich_check(const SandwichSpec& spec, const FppOptions& options) {
  check_signatures(spec);
  return {fpp_decide(spec.patterns, spec.a, options).has_value(),
          maps_to(spec.report.factor, spec.b, options.hom)};
}

bool pcsp_solve(const SandwichSpec& spec, const Structure& x, LiftParams params, const FppOptions& options) {
  check_signatures(spec);
  if (!(x.signature() == spec.a.signature())) throw SignatureMismatch("pcsp: instance over another signature");
  params.l = static_cast<int>(spec.report.threshold);
  params.protect = {spec.a, spec.b};
  auto lift = girth_lift(x, params);
  return fpp_decide(spec.patterns, lift.structure, options).has_value();
}

}  // namespace gmsnp
