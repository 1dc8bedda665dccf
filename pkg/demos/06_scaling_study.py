"""
How convergence time scales with network size
=============================================

Sweep the client count at fixed BS counts. Convergence is slowest when
there are one to two clients per BS -- enough contention that columns keep
getting rewritten, not so much that the even split is already close. Past
five clients per BS the step counts fall again.

This is a reduced-size version of the full study (the `sweep` CLI
subcommand runs the complete grid at 100 seeds).
"""

from ratagg import convergence_sweep

cells = convergence_sweep(
    client_counts=(5, 10, 20, 30, 40, 60),
    bs_counts=(10, 20),
    seeds=20,
)

for m in (10, 20):
    rows = [c for c in cells if c.num_bss == m]
    print(f"\nM = {m} BSs")
    print("   N   N/M   mean steps  (std)     mean messages")
    for c in rows:
        print(f"  {c.num_clients:3d}  {c.num_clients / m:4.1f}   "
              f"{c.mean_steps:7.1f}   ({c.std_steps:5.1f})   {c.mean_messages:9.1f}")
    peak = max(rows, key=lambda c: c.mean_steps)
    print(f"  slowest at N = {peak.num_clients} (N/M = {peak.num_clients / m:.1f})")
