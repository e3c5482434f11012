# Mixing from the root of a binary tree versus from one of its children.
#
# From a child, the walk first has to escape its own subtree, whose
# stationary mass is about 1/2; the time to do so doubles per level.
#
# Run with:  python3 notebooks/03_binary_tree.py

from specprofile.experiments import tree_demo
from specprofile.rough_isometry import binary_tree, check_rough_isometry, path_metric

report = tree_demo(9)
print(" h     n   tau_root  tau_child  child/root")
for row in report.rows:
    print(f"{row['h']:2d} {row['n']:5d} {row['tau_root']:9.3f} {row['tau_child']:10.3f} {row['child_over_root']:10.3f}")
print("flags:", report.flags)

# Collapsing every leaf onto its parent moves distances by at most 2:
# a 2-rough isometry of the tree into itself, but not a 1-rough one.
h = 4
t = path_metric(binary_tree(h))
first_leaf = 2**h - 1
collapse = [(v - 1) // 2 if v >= first_leaf else v for v in range(t.num_vertices)]
for K in (1, 2):
    r = check_rough_isometry(t, t, collapse, K)
    print(f"K = {K}: holds = {r.holds}, witness = {r.witness}")
