"""Compare exact solution counts with the computed density bound."""
from sqfree import GSystem, count_solutions, density_estimate


def main():
    systems = {"sqf(x)": GSystem.build(c=[0]),
               "sqf(x) & sqf(x+1)": GSystem.build(c=[0, 1]),
               "sqf(x) & sqf(x+4) & !sqf(x+2)": GSystem.build(c=[0, 4], c_neg=[2])}
    for name, s in systems.items():
        est = density_estimate(s)
        print(f"{name}: eps={float(est.epsilon):.3e} N={est.N} D={est.D} "
              f"log10|C|={est.log10_abs_C:.1f}")
        for T in (10**4, 10**5, 10**6):
            n = count_solutions(s, 1, T)
            print(f"  T={T:>8}  count={n:>7}  count/T={n / T:.5f}  bound={est.lower_bound(T)}")


if __name__ == "__main__":
    main()
