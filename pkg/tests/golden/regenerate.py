"""Rewrite the golden files from the generators: python tests/golden/regenerate.py"""

from pathlib import Path

from costsr.export import export_veripb
from costsr.formats import print_cnf, print_instance, print_msr_proof, print_proof
from costsr.gen import gen_bphp, gen_bphp_proof, gen_hamming_family, lift_min_unsat, php_cnf, rup_refutation
from costsr.model import Clause, Formula, Instance
from costsr.msr import ConcludeBot, CopyToSoft, HardInfer, Merge, MsrProof

HERE = Path(__file__).parent
BPHP = [(2, 1), (3, 2), (4, 2), (4, 3)]


def artifacts():
    out = {}
    for m, n in BPHP:
        inst, proof = gen_bphp(m, n), gen_bphp_proof(m, n)
        out["bphp_%d_%d.bcnf" % (m, n)] = print_instance(inst)
        out["bphp_%d_%d.proof" % (m, n)] = print_proof(proof)
        out["bphp_%d_%d.pb" % (m, n)] = export_veripb(inst, proof)
    for n in (1, 2, 3):
        out["hamming_%d.bcnf" % n] = print_instance(gen_hamming_family(n))
    php = php_cnf(3, 2)
    out["php_3_2.cnf"] = print_cnf(php)
    refutation = rup_refutation(php)
    out["php_3_2.refutation"] = print_proof(refutation)
    inst, proof = lift_min_unsat(php, refutation)
    out["php_3_2_lifted.bcnf"] = print_instance(inst)
    out["php_3_2_lifted.proof"] = print_proof(proof)
    two = Instance(Formula([Clause([1, 2]), Clause([-1, 2])]), (2,), 2)
    out["two_copies.bcnf"] = print_instance(two)
    out["two_copies.msr"] = print_msr_proof(MsrProof((
        HardInfer(Clause([2])), CopyToSoft(Clause([2])), Merge(Clause(), 2), ConcludeBot(1))))
    return out


if __name__ == "__main__":
    for name, text in sorted(artifacts().items()):
        (HERE / name).write_text(text, encoding="utf-8")
        print("wrote", name)
