"""Adult-equivalence scales.

Household members do not weigh equally when comparing incomes: a child
costs less than an adult, and two adults sharing a roof cost less than two
singles. Three classic weighting schemes are implemented.

  oxford   chief adult 1.0, other adults 0.7, children 0.5
  faofam   male adults 1.0, female adults 0.8, children 0.5
  dmp      whole-household formula (Na + c*Ne)**s

An adult is anyone aged 15 or more (class 4 or more under the five-year
class encoding). The age test runs first in all schemes: a ten-year-old
marked as household chief still weighs 0.5.
"""

from hdbprep import Age, AgeEncoding, Gender, dmp_scale, faofam_weight, oxford_weight

YEARS = AgeEncoding.YEARS

print("oxford weights")
for age, chief in [(34, True), (30, False), (10, False), (10, True), (15, False)]:
    w = oxford_weight(Age(float(age)), YEARS, chief)
    role = "chief" if chief else "other"
    print(f"  age {age:>2} {role:<5} -> {w}")

print("faofam weights")
for age, gender in [(34, Gender.MALE), (30, Gender.FEMALE), (10, Gender.FEMALE)]:
    w = faofam_weight(Age(float(age)), YEARS, gender)
    print(f"  age {age:>2} {gender.name.lower():<6} -> {w}")

# the DMP scale works on household counts, not members
print("dmp scale, 2 adults + 3 children")
for c, s in [(0.5, 0.7), (1.0, 1.0), (0.5, 1.0), (0.3, 0.5)]:
    print(f"  c={c} s={s} -> {dmp_scale(2, 3, c, s):.6f}")

# s tunes economies of scale: s=1 means none, s near 0 means a household
# of any size lives as cheaply as one adult
print("economies of scale for 4 adults")
for s in (1.0, 0.7, 0.4, 0.1):
    print(f"  s={s} -> {dmp_scale(4, 0, 0.5, s):.4f}")
