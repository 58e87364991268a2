from twisted_forms.braiding import BlockMatrix as BlockMatrix
from twisted_forms.braiding import TensorBlock as TensorBlock
from twisted_forms.braiding import TensorForm as TensorForm
from twisted_forms.braiding import braid_closed as braid_closed
from twisted_forms.braiding import braid_inverse as braid_inverse
from twisted_forms.braiding import braid_matrix as braid_matrix
from twisted_forms.braiding import braid_oracle as braid_oracle
from twisted_forms.braiding import check_axioms as check_axioms
from twisted_forms.braiding import check_oracle as check_oracle
from twisted_forms.braiding import tensor as tensor
from twisted_forms.braiding import tensor_block as tensor_block
from twisted_forms.braiding import tensor_differential as tensor_differential
from twisted_forms.braidrep import PowerBlock as PowerBlock
from twisted_forms.braidrep import SubquotientSpec as SubquotientSpec
from twisted_forms.braidrep import enumerate_block as enumerate_block
from twisted_forms.braidrep import export_matrices as export_matrices
from twisted_forms.braidrep import representation as representation
from twisted_forms.braidrep import sigma_matrix as sigma_matrix
from twisted_forms.braidrep import verify_braid_relations as verify_braid_relations
from twisted_forms.braidrep import verify_involution as verify_involution
from twisted_forms.config import Config as Config
from twisted_forms.config import load_config as load_config
from twisted_forms.expressions import parse_expression as parse_expression
from twisted_forms.kernel import EndoSpec as EndoSpec
from twisted_forms.kernel import FieldSpec as FieldSpec
from twisted_forms.kernel import Relation as Relation
from twisted_forms.omega import AlgebraCtx as AlgebraCtx
from twisted_forms.omega import DiffForm as DiffForm
from twisted_forms.omega import alpha_form as alpha_form
from twisted_forms.omega import build_block_basis as build_block_basis
from twisted_forms.omega import differential as differential
from twisted_forms.omega import homotopy_I as homotopy_I
from twisted_forms.omega import mul as mul
from twisted_forms.omega import normalize as normalize
