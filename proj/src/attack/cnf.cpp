#include "bcamo/cnf.hpp"

namespace bcamo {

CnfFormula tseitin_encode(const Netlist& n) {
  CnfFormula f;
  TseitinEncoder<CnfFormula> enc(f);
  f.net_lits = enc.encode(n);
  return f;
}

}  // namespace bcamo
