from .base import IndexAssignment, Scheme, assign_tokens_to_tree, tree_ids
from .trivial import index_rid, index_tid, index_iid
from .sequential import index_sid, sequential_numbers
from .collaborative import index_cid
from .semantic import UNKNOWN_PATH, CategoryTree, build_category_tree, choose_path, index_semid
from .hybrid import compose_hid, required_parts

__all__ = [
    'IndexAssignment',
    'Scheme',
    'assign_tokens_to_tree',
    'tree_ids',
    'index_rid',
    'index_tid',
    'index_iid',
    'index_sid',
    'sequential_numbers',
    'index_cid',
    'UNKNOWN_PATH',
    'CategoryTree',
    'build_category_tree',
    'choose_path',
    'index_semid',
    'compose_hid',
    'required_parts'
]
