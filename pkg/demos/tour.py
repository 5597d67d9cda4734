"""Parse, decide, enumerate and eliminate quantifiers in each theory."""
from fractions import Fraction

from sqfree import (Interval, Theory, check_formula, decide_sentence, eliminate_exists,
                    enumerate_formula, parse_formula, print_formula)


def show(label, value):
    print(f"{label:<48} {value}")


def main():
    f = parse_formula("sqf(x) & sqf(x+1) & !sqf(x+2)", Theory.Z1)
    show("formula", print_formula(f))
    res = check_formula(f, Theory.Z1)
    show("check_formula over Z", f"{res.status}, witness {res.witness}")
    ws = enumerate_formula(f, Theory.Z1, count=6, start=0)
    show("first witnesses from 0", " ".join(map(str, ws)))

    bad = parse_formula("x in U[2,2] & sqf(x)", Theory.Z1)
    res = check_formula(bad, Theory.Z1)
    show("x in U[2,2] & sqf(x)", f"{res.status}: {res.certificate['analysis']}")

    g = parse_formula("sqf(x) & x in U[3,1]", Theory.Q2)
    res = check_formula(g, Theory.Q2, interval=Interval(Fraction(0), Fraction(1, 10)))
    show("sqf(x) & x in U[3,1] inside (0, 1/10) over Q2", res.witness)

    for text, theory in [("exists x. 2*x - y = 0", Theory.Z1),
                         ("exists x. 2*x - y = 0", Theory.Q1),
                         ("exists x. y < x & x < z & sqf(x)", Theory.Q2),
                         ("exists x. sqf(x) & sqf(x + y) & x in U[2,1]", Theory.Z1)]:
        qf = eliminate_exists(parse_formula(text, theory), theory)
        show(f"{theory.name}: {text}", print_formula(qf))

    for text, theory in [("exists x. !(x in U[2,0]) & sqf(x)", Theory.Z1),
                         ("exists x. !(x in U[2,0]) & sqf(x)", Theory.Q1)]:
        show(f"{theory.name}: {text}", decide_sentence(parse_formula(text, theory), theory))


if __name__ == "__main__":
    main()
