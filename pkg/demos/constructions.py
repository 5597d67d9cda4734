"""Square-free gap patterns, the squares set S, multiplication, and IP_k witnesses."""
from sqfree.constructions import (PatternSpec, consecutive_squarefree_squares_run,
                                  find_pattern_run, ipk_witness, is_in_S, mult_via_definability,
                                  pattern_progression)
from sqfree.errors import BudgetExhausted, LocallyUnsatisfiable, WitnessBoundExhausted


def main():
    print("square-free set of (a, a+4] is {a+1, a+4}: a =", find_pattern_run(PatternSpec((1, 4)), 1000))
    try:
        find_pattern_run(PatternSpec((0, 1, 2, 3)), 1000)
    except LocallyUnsatisfiable as exc:
        print("four square-frees in a row: impossible at p =", exc.prime)

    for n in (1, 2, 3, 4):
        try:
            a = consecutive_squarefree_squares_run(n, 10**7)
            print(f"run of {n} squares: a = {a}")
        except BudgetExhausted:
            print(f"run of {n} squares: none below 1e7 (least is 630077118 for n = 4)")

    print("S on [0, 30) (? = no witness below 1e6):",
          " ".join(f"{c}{_in_S(c)}" for c in range(30) if _in_S(c) is not None))
    print("mult(1, 1) =", mult_via_definability(1, 1, 10**7))
    print("progression for l=4, S={0,1,2,3}:", pattern_progression(4, [0, 1, 2, 3]))

    w = ipk_witness(1, 2)
    print(f"IP_1 witness n=2: b={w.b} d={w.d} verified={w.check()}")


def _in_S(c):
    try:
        return "" if is_in_S(c, 10**6) else None
    except WitnessBoundExhausted:
        return "?"


if __name__ == "__main__":
    main()
