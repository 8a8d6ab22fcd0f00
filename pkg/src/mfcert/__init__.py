"""Exact-arithmetic engine for Z/2-graded curved complexes over polynomial
rings, with replayable certificates for K-theory identities."""

from .scalars import (FieldError, Scalar, ScalarField, cyclotomic_field,
                      rationals, roots_of_unity)
from .polynomials import (LAMBDA, ContextError, DivisionError, ParseError,
                          Poly, PolyRing, exact_divide)
from .supermod import (EVEN, ODD, ParityMap, ShapeError, SuperModule, compose,
                       direct_sum, direct_sum_modules, dual, parity_unit,
                       shift, tensor, tensor_module)
from .complexes import (ChainMap, Cone, CurvatureError, CurvedComplex,
                        Filtration, Homotopy, SampleError, SupportLocus,
                        Verdict, associated_graded, cone, curvature_check,
                        filtration_verify, is_chain_map, is_homotopy,
                        strict_exactness_sample)
from .clifford import (OrthoSection, SpinorModule, SpinorSplit, action_complex,
                       clifford_action, clifford_square, contraction_operator,
                       spinor_module, spinor_split, wedge_operator)
from .constructions import (InvariantError, LambdaFamily, Lemma1Result,
                            Lemma2Result, RamondData, RemarkResult,
                            SLambdaResult, SXiReduceResult, SymPowerResult,
                            TauData, TwistFamily, TwoTermComplex, cone_lift,
                            cyclotomic_coupling, lemma1_build, lemma2_build,
                            multinomial, product_differential,
                            remark_decompose, s_lambda_check, s_xi_build,
                            s_xi_reduce, sym_power)
from .kcert import (Certificate, CertVerdict, FiltrationMove, HomotopyMove,
                    IsoMove, IsoPair, compose_certs, verify)

__version__ = "0.1.0"
