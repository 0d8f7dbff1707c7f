// Classify a filtered quadratic bracket on k[x,y] and print the certificate.

#include <iostream>

#include "pforge/pforge.hpp"

using namespace pforge;

int main() {
  std::vector<std::string> names = {"x", "y"};
  Poly f = parse_poly("x^2 + 3*x + 2*y + 5", names);

  ClassificationCertificate cert = classify_2var(f);
  std::cout << "{x,y} = " << poly_string(f, names) << "\n";
  std::cout << "normal form: " << family_name(cert.label.family);
  if (cert.label.lambda) std::cout << "  (lambda = " << to_string(*cert.label.lambda) << ")";
  std::cout << "\n\nchange of variables:\n";
  for (std::size_t i = 0; i < names.size(); ++i)
    std::cout << "  " << names[i] << " -> " << poly_string(cert.subst.images()[i], names) << "\n";

  std::cout << "\nreplay check: " << (replay(f, cert) ? "ok" : "FAILED") << "\n";

  InvariantFingerprint fp = fingerprint(bivector_structure_2(f));
  std::cout << "principal Poisson primes (deg <= 2):";
  for (const auto& p : fp.principal_primes_deg2) std::cout << " " << poly_string(p, names);
  std::cout << "\n";
  return 0;
}
