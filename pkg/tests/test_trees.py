import pytest

from privreg import KTree, TreeError
from privreg.trees import augmented_root, full_node, validate_kary

from helpers import X2


def test_leaf_and_depth():
    leaf = KTree.leaf()
    assert leaf.is_leaf and leaf.depth() == 0
    node = full_node(0, 4)
    assert node.depth() == 1 and len(node.children) == 4


def test_attach_identity():
    base = KTree.leaf()
    sub = full_node(1, 3)
    base.attach(sub, ())
    assert base.point_index == 1
    assert sorted(base.children) == [1, 2, 3]
    with pytest.raises(TreeError):
        base.attach(sub, ())          # no longer a leaf
    with pytest.raises(TreeError):
        base.attach(KTree.leaf(), (1,))


def test_attach_copies_subtree():
    base = full_node(0, 2)
    sub = full_node(1, 2)
    base.attach(sub, (1,))
    base.attach(sub, (2,))
    base.node_at((1,)).children[1].point_index = 99
    assert base.node_at((2,)).children[1].is_leaf


def test_ancestor_sets():
    t = full_node(0, 2)
    t.attach(full_node(1, 2), (2,))
    assert t.ancestor_set((2, 1)) == ((0, 2), (1, 1))
    assert t.ancestor_set(()) == ()
    with pytest.raises(TreeError):
        t.ancestor_set((1, 1, 1))


def test_leaves_order_deterministic():
    t = full_node(0, 3)
    paths = [p for p, _ in t.leaves()]
    assert paths == [(1,), (2,), (3,)]


def test_validate_kary():
    validate_kary(KTree.leaf(), 4)
    validate_kary(full_node(0, 4), 4)
    bad = KTree(0, {1: KTree.leaf()})
    with pytest.raises(TreeError):
        validate_kary(bad, 4)
    validate_kary(augmented_root(0, 2), 4, augmented=True)
    with pytest.raises(TreeError):
        validate_kary(KTree.leaf(), 4, augmented=True)
    with pytest.raises(TreeError):
        validate_kary(full_node(0, 4), 4, augmented=True)


def test_json_roundtrip():
    t = full_node(0, 2)
    t.attach(full_node(1, 2), (1,))
    obj = t.to_json(X2)
    back = KTree.from_json(obj, X2)
    assert back.to_json(X2) == obj
    assert KTree.from_json(None, X2).is_leaf
