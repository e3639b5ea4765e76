"""Time the yearly dispatch kernel: numba against the pure-numpy path.

Usage: python3 benchmarks/bench_kernels.py [--repeat 200] [--seed 1]
"""
import argparse
import time

import numpy as np

from hresopt.components import ComponentCatalog
from hresopt.dispatch import DesignVector, prepare_scenario, simulate_year
from hresopt.timeseries import SiteConfig, SynthesisParams, synth_scenario


def time_backend(backend, designs, scenario, catalog, prepared, repeat):
    simulate_year(designs[0], scenario, catalog, prepared=prepared, backend=backend)  # warm-up / compile
    t0 = time.perf_counter()
    lpsp = []
    for i in range(repeat):
        r = simulate_year(designs[i % len(designs)], scenario, catalog, prepared=prepared, backend=backend)
        lpsp.append(r.lpsp)
    return (time.perf_counter() - t0) / repeat, np.array(lpsp)


def main():
    parser = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    parser.add_argument("--repeat", type=int, default=200, help="simulated years per backend")
    parser.add_argument("--seed", type=int, default=1, help="scenario seed")
    args = parser.parse_args()

    catalog = ComponentCatalog()
    scenario = synth_scenario(SiteConfig(), SynthesisParams(), args.seed)
    prepared = prepare_scenario(scenario, catalog)
    rng = np.random.default_rng(0)
    designs = [DesignVector(int(rng.integers(1, 300)), int(rng.integers(1, 8)), int(rng.integers(1, 40)),
                            float(rng.uniform(0, 90)), float(rng.uniform(11, 40)), int(rng.integers(1, 4)))
               for _ in range(32)]

    t_nb, l_nb = time_backend("numba", designs, scenario, catalog, prepared, args.repeat)
    t_np, l_np = time_backend("numpy", designs, scenario, catalog, prepared, args.repeat)
    print(f"numba: {t_nb * 1e6:10.1f} us per simulated year")
    print(f"numpy: {t_np * 1e6:10.1f} us per simulated year")
    print(f"speedup: {t_np / t_nb:.1f}x, max LPSP difference {np.abs(l_nb - l_np).max():.2e}")


if __name__ == "__main__":
    main()
