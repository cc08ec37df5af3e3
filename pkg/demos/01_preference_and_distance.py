"""How the preference relation turns into a one-dimensional distance.

Run: python demos/01_preference_and_distance.py
"""

import numpy as np

from monoclust import dominates, mono_distance, preference, projection, weighted_l1

w = np.array([1.0, 0.5, 0.25])
x = np.array([3.0, 1.0, 4.0])
y = np.array([1.0, 2.0, 4.0])

# x beats y on the first feature only, y beats x on the second
print("r(x, y) =", preference(x, y, w))
print("r(y, x) =", preference(y, x, w))
print("weighted L1 =", weighted_l1(x, y, w), "= r(x,y) + r(y,x)")

# the monotonic distance only sees the net advantage, which is a
# difference of weighted coordinate sums
s = projection(np.vstack([x, y]), w)
print("mono distance =", mono_distance(x, y, w), "; |s(x) - s(y)| =", abs(s[0] - s[1]))

# if x dominates z, x can never be worse off under the projection
z = x - np.array([0.5, 0.0, 2.0])
print("x dominates z:", dominates(x, z), "; s(x) >= s(z):", projection(x, w) >= projection(z, w))
