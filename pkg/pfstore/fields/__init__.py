from pfstore.fields.gf2m import FieldSpec, FieldElement, get_field, add, mul, inv, reduce_mul
from pfstore.fields.linalg import solve_linear, solve_symbols, vandermonde, mat_mul
