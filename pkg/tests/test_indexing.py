import numpy as np
import pytest

from analysis import shared_prefix_len
from conftest import TABLE2, clique_graph, corpus_from_sequences, item_name, random_corpus, random_graph, random_metadata
from corpus import ItemMeta, UserOrdering, build_cooccurrence_graph, leave_one_out_split
from errors import ArgumentError, ConstraintError, ItemSetMismatchError, MissingTitleError, StructureError
from helper_func import category_label
from indexing import (
    UNKNOWN_PATH,
    IndexAssignment,
    Scheme,
    assign_tokens_to_tree,
    build_category_tree,
    choose_path,
    compose_hid,
    index_cid,
    index_iid,
    index_rid,
    index_semid,
    index_sid,
    index_tid,
    required_parts,
    sequential_numbers,
    tree_ids,
)
from spectral import ClusterNode, ClusterTree
from tokenization import SegmenterModel, TokenRegistry
from trie import build_trie, verify_assignment


def number_of(assignment, item):
    return int("".join(token.text for token in assignment.ids[item]))


def rendered(assignment):
    return {item: assignment.rendered(item) for item in assignment.items}


def handmade(scheme, ids):
    registry = TokenRegistry()
    parsed = {item: tuple(registry.parse(text) for text in tokens) for item, tokens in ids.items()}
    return IndexAssignment(scheme, parsed, registry)


def lip_liner_metadata(count):
    metadata = {
        f"lip{n}": ItemMeta(category_paths=(("Beauty", "Makeup", "Lips", "Lip Liners"),)) for n in range(count)
    }
    metadata["cream"] = ItemMeta(category_paths=(("Beauty", "Skin Care"),))
    return metadata


def test_sid_on_table2(table2_split, numeric_model):
    assignment = index_sid(table2_split, "TSO", numeric_model)
    user2 = TABLE2["User2"][0]
    assert [number_of(assignment, item_name(n)) for n in user2] == user2
    for train, _, _ in TABLE2.values():
        for n in train:
            assert number_of(assignment, item_name(n)) == n
    assert number_of(assignment, item_name(1033)) == 1032
    assert number_of(assignment, item_name(1034)) == 1033
    assert assignment.cold_items == [item_name(1033), item_name(1034)]
    assert assignment.params == {"ordering": "TSO"}


def test_sid_segments_numbers(table2_split, numeric_model):
    assignment = index_sid(table2_split, UserOrdering.TSO, numeric_model)
    assert assignment.rendered(item_name(1001)) == "100 1"
    assert assignment.rendered(item_name(1018)) == "10 18"


def test_sid_single_user():
    split = leave_one_out_split(corpus_from_sequences({"u": ["x", "y", "z", "v", "t"]}))
    numbers, cold = sequential_numbers(split, "TSO")
    assert [numbers[item] for item in ["x", "y", "z"]] == [1001, 1002, 1003]
    assert cold == ["v", "t"]


def test_sid_depends_on_user_order(numeric_model):
    first = {user: TABLE2[user] for user in ["User1", "User2", "User3", "User4", "User5"]}
    swapped = {user: TABLE2[user] for user in ["User2", "User1", "User3", "User4", "User5"]}

    def build(table):
        sequences = {user: [item_name(n) for n in train + [val, test]] for user, (train, val, test) in table.items()}
        return index_sid(leave_one_out_split(corpus_from_sequences(sequences)), "TSO", numeric_model)

    assert rendered(build(first)) != rendered(build(swapped))


def test_sid_numbers_are_consecutive(numeric_model):
    rng = np.random.default_rng(12)
    split = leave_one_out_split(random_corpus(rng, users=30, items=40))
    for ordering in UserOrdering:
        numbers, _ = sequential_numbers(split, ordering, seed=4)
        assert sorted(numbers.values()) == list(range(1001, 1001 + len(numbers)))


def test_sid_random_ordering_records_seed(table2_split, numeric_model):
    assignment = index_sid(table2_split, "RO", numeric_model, seed=9)
    assert assignment.params == {"ordering": "RO", "seed": 9}
    assert rendered(assignment) == rendered(index_sid(table2_split, "RO", numeric_model, seed=9))


def test_rid_range_and_uniqueness(numeric_model):
    items = [f"i{n}" for n in range(200)]
    assignment = index_rid(items, seed=1, model=numeric_model)
    numbers = [number_of(assignment, item) for item in items]
    assert len(set(numbers)) == 200
    assert min(numbers) >= 1 and max(numbers) <= 2000
    assert assignment.params == {"seed": 1}


def test_rid_is_seeded(numeric_model):
    items = [f"i{n}" for n in range(50)]
    assert rendered(index_rid(items, 3, numeric_model)) == rendered(index_rid(items, 3, numeric_model))
    assert rendered(index_rid(items, 3, numeric_model)) != rendered(index_rid(items, 4, numeric_model))


def test_rid_single_item(numeric_model):
    assignment = index_rid(["only"], seed=0, model=numeric_model)
    assert 1 <= number_of(assignment, "only") <= 10


def test_tid_segments_titles(title_model):
    metadata = {"shop": ItemMeta(title="Las Vegas Cigar Outlet"), "ab": ItemMeta(title="  A  B ")}
    assignment = index_tid(["shop", "ab"], metadata, title_model)
    assert assignment.rendered("shop") == "Las Vegas Ci gar Outlet"
    assert assignment.rendered("ab") == "A B"
    assert not assignment.extra_labels()


def test_tid_numbers_duplicate_titles(title_model):
    metadata = {name: ItemMeta(title="Soap") for name in ["s1", "s2", "s3"]}
    assignment = index_tid(["s1", "s2", "s3"], metadata, title_model)
    assert assignment.rendered("s1") == "Soap"
    assert assignment.rendered("s2") == "Soap ( 2 )"
    assert assignment.rendered("s3") == "Soap ( 3 )"


def test_tid_suffix_without_bracket_pieces():
    model = SegmenterModel(pieces={"Soap": -1.0, "S": -4.0})
    metadata = {name: ItemMeta(title="Soap") for name in ["s1", "s2", "s3"]}
    assignment = index_tid(["s1", "s2", "s3"], metadata, model)
    assert rendered(assignment) == {"s1": "Soap", "s2": "Soap <(2)>", "s3": "Soap <(3)>"}
    assert assignment.extra_labels() == ["(2)", "(3)"]


def test_tid_missing_titles(title_model):
    metadata = {"a": ItemMeta(title="Soap"), "b": ItemMeta(title="   ")}
    with pytest.raises(MissingTitleError) as excinfo:
        index_tid(["a", "b", "c"], metadata, title_model)
    assert excinfo.value.items == ["b", "c"]


def test_iid():
    assignment = index_iid(["a", "b", "c"])
    assert rendered(assignment) == {"a": "<IID0>", "b": "<IID1>", "c": "<IID2>"}
    assert len(index_iid([])) == 0


def test_assignment_rejects_empty_ids():
    with pytest.raises(StructureError):
        IndexAssignment(Scheme.IID, {"a": ()}, TokenRegistry())


def test_scheme_parse():
    assert Scheme.parse("CID") is Scheme.CID
    with pytest.raises(ArgumentError):
        Scheme.parse("xid")


def small_tree():
    c, d = ClusterNode(items=["c1", "c2"]), ClusterNode(items=["d1"])
    a = ClusterNode(children=[c, d])
    b = ClusterNode(items=["b1", "b2", "b3"])
    order = {item: n for n, item in enumerate(["c1", "c2", "d1", "b1", "b2", "b3"])}
    return ClusterTree(root=ClusterNode(children=[a, b]), item_order=order), (a, b, c, d)


def test_assign_tokens_cycles_breadth_first():
    tree, (a, b, c, d) = small_tree()
    assign_tokens_to_tree(tree, 3, TokenRegistry())
    assert [node.token.render() for node in (a, b, c, d)] == ["<0>", "<1>", "<2>", "<0>"]
    ids = {item: " ".join(token.render() for token in tokens) for item, tokens in tree_ids(tree).items()}
    assert ids["c2"] == "<0> <2> <1>"
    assert ids["d1"] == "<0> <0> <0>"
    assert ids["b3"] == "<1> <2>"


def test_assign_tokens_single_cluster():
    tree = ClusterTree(root=ClusterNode(items=["x", "y"]), item_order={"x": 0, "y": 1})
    assign_tokens_to_tree(tree, 2, TokenRegistry())
    assert {item: [t.render() for t in tokens] for item, tokens in tree_ids(tree).items()} == {
        "x": ["<0>"],
        "y": ["<1>"],
    }


def test_assign_tokens_rejects_oversized_nodes():
    tree, _ = small_tree()
    with pytest.raises(StructureError):
        assign_tokens_to_tree(tree, 2, TokenRegistry())


def test_cid_two_cliques():
    graph = clique_graph([5, 5])
    assignment = index_cid(graph, N=2, k=5, seed=0)
    first = {item: assignment.ids[item][0] for item in graph.nodes}
    for clique in ("c0", "c1"):
        assert len({token for item, token in first.items() if item.startswith(clique)}) == 1
    assert first["c0_0"] != first["c1_0"]
    assert all(len(tokens) == 2 for tokens in assignment.ids.values())
    assert assignment.params == {"N": 2, "k": 5, "seed": 0}


def test_cid_small_graph_has_length_one_ids():
    assignment = index_cid(clique_graph([4]), N=2, k=5, seed=0)
    assert all(len(tokens) == 1 for tokens in assignment.ids.values())


def test_cid_tokens_stay_below_k():
    rng = np.random.default_rng(3)
    graph = random_graph(rng, 300, density=0.02)
    assignment = index_cid(graph, N=4, k=20, seed=1)
    assert set(assignment.extra_labels()) <= {str(n) for n in range(20)}


def test_cid_rejects_n_above_k():
    with pytest.raises(ConstraintError):
        index_cid(clique_graph([4]), N=5, k=3, seed=0)


def test_cid_is_prefix_free_with_distinct_siblings():
    rng = np.random.default_rng(44)
    for trial in range(15):
        graph = random_graph(rng, int(rng.integers(30, 150)), density=0.05, connected=bool(trial % 2))
        N = int(rng.integers(2, 5))
        assignment = index_cid(graph, N, int(rng.integers(N, 12)), seed=trial)
        report = verify_assignment(build_trie(assignment), assignment)
        assert report.unique and report.prefix_free
        tree = assignment.tree
        for node in [tree.root, *tree.nodes()]:
            tokens = [child.token for child in node.children]
            assert len(tokens) == len(set(tokens))


def test_choose_path():
    meta = ItemMeta(category_paths=(("B", "z"), ("B", "a", "x"), ("B", "a", "b")))
    assert choose_path(meta) == ("B", "a", "b")
    assert choose_path(None) == UNKNOWN_PATH
    assert choose_path(ItemMeta()) == UNKNOWN_PATH


def test_semid_lip_liners():
    metadata = lip_liner_metadata(6)
    items = list(metadata)
    assignment = index_semid(items, metadata)
    assert assignment.rendered("lip5") == "<Makeup> <Lips> <Lip_Liners> <5>"
    assert assignment.rendered("cream") == "<Skin_Care> <0>"


def eyes_metadata():
    return {
        "serum": ItemMeta(category_paths=(("Beauty", "Skin Care", "Eyes"),)),
        "wipe": ItemMeta(category_paths=(("Beauty", "Makeup Remover", "Eyes"),)),
        "balm": ItemMeta(category_paths=(("Beauty", "Skin Care", "Eyes"),)),
    }


def test_semid_tree_mode_numbers_repeated_names():
    metadata = eyes_metadata()
    assignment = index_semid(list(metadata), metadata, mode="tree")
    assert assignment.rendered("serum") == "<Skin_Care> <Eyes1> <0>"
    assert assignment.rendered("balm") == "<Skin_Care> <Eyes1> <1>"
    assert assignment.rendered("wipe") == "<Makeup_Remover> <Eyes2> <0>"


def test_semid_non_tree_mode_shares_names():
    metadata = eyes_metadata()
    assignment = index_semid(list(metadata), metadata, mode="non-tree")
    assert assignment.rendered("serum") == "<Skin_Care> <Eyes> <0>"
    assert assignment.rendered("wipe") == "<Makeup_Remover> <Eyes> <0>"
    assert assignment.params == {"mode": "non-tree"}


def test_semid_groups_uncategorised_items():
    metadata = lip_liner_metadata(2)
    items = list(metadata) + ["mystery1", "mystery2"]
    assignment = index_semid(items, metadata)
    assert assignment.rendered("mystery1") == "<Unknown> <0>"
    assert assignment.rendered("mystery2") == "<Unknown> <1>"


def test_category_label_escapes_reserved_names():
    assert category_label(" Lip  Liners ") == "Lip_Liners"
    assert category_label("<Eyes>") == "Eyes"
    assert category_label("0") == "#0"
    assert category_label("12") == "#12"
    assert category_label("Unknown") == "#Unknown"
    assert category_label("#Unknown") == "#Unknown"
    assert category_label("C#") == "C"
    assert category_label("Unknown Mix") == "Unknown_Mix"


@pytest.mark.parametrize("mode", ["tree", "non-tree"])
def test_semid_numeric_category_stays_prefix_free(mode):
    metadata = {
        "x": ItemMeta(category_paths=(("Beauty", "Tools"),)),
        "y": ItemMeta(category_paths=(("Beauty", "Tools", "0"),)),
    }
    assignment = index_semid(["x", "y"], metadata, mode=mode)
    assert assignment.rendered("x") == "<Tools> <0>"
    assert assignment.rendered("y") == "<Tools> <#0> <0>"
    assert verify_assignment(build_trie(assignment), assignment).prefix_free


def test_semid_real_unknown_category_is_kept_apart():
    metadata = {
        "a": ItemMeta(category_paths=(("Unknown", "Odds"),)),
        "b": ItemMeta(category_paths=(("Beauty", "Lips"),)),
    }
    assignment = index_semid(["a", "b", "c"], metadata)
    assert assignment.rendered("a") == "<#Unknown> <Odds> <0>"
    assert assignment.rendered("c") == "<Unknown> <0>"
    assert len(assignment.tree.root.children) == 3


def test_semid_tree_mode_numbers_names_that_normalise_alike():
    metadata = {
        "l1": ItemMeta(category_paths=(("Beauty", "Lips", "Lip Liners"),)),
        "l2": ItemMeta(category_paths=(("Beauty", "Lips", "Lip_Liners"),)),
    }
    tree_mode = index_semid(["l1", "l2"], metadata, mode="tree")
    assert tree_mode.rendered("l1") == "<Lips> <Lip_Liners1> <0>"
    assert tree_mode.rendered("l2") == "<Lips> <Lip_Liners2> <0>"

    flat = index_semid(["l1", "l2"], metadata, mode="non-tree")
    assert flat.rendered("l1") == "<Lips> <Lip_Liners> <0>"
    assert flat.rendered("l2") == "<Lips> <Lip_Liners> <1>"


def test_semid_awkward_category_names():
    names = ["0", "1", "Unknown", "Eyes", "Lip Liners", "Lip_Liners", "#0", "<1>"]
    rng = np.random.default_rng(31)
    for trial in range(30):
        items = [f"p{n}" for n in range(int(rng.integers(5, 80)))]
        metadata = {}
        for item in items:
            if rng.random() < 0.1:
                continue
            depth = int(rng.integers(1, 5))
            path = tuple(names[int(i)] for i in rng.integers(len(names), size=depth))
            metadata[item] = ItemMeta(category_paths=(path,))
        for mode in ("tree", "non-tree"):
            assignment = index_semid(items, metadata, mode=mode)
            report = verify_assignment(build_trie(assignment), assignment)
            assert report.unique and report.prefix_free, (trial, mode)
        # tree mode: one token per category node
        tokens = [node.token for node in index_semid(items, metadata, mode="tree").tree.nodes()]
        assert len(set(tokens)) == len(tokens)


def test_semid_rejects_unknown_mode():
    with pytest.raises(ArgumentError):
        index_semid(["a"], {}, mode="flat")


def test_category_tree_keeps_root_when_roots_differ():
    metadata = {
        "a": ItemMeta(category_paths=(("Beauty", "Lips"),)),
        "b": ItemMeta(category_paths=(("Garden", "Tools"),)),
    }
    tree, paths = build_category_tree(["a", "b"], metadata)
    assert paths == {"a": ("Beauty", "Lips"), "b": ("Garden", "Tools")}
    assert [child.name for child in tree.root.children] == ["Beauty", "Garden"]


def test_hid_sid_iid():
    sid = handmade(Scheme.SID, {"x": ["10", "18"]})
    iid = handmade(Scheme.IID, {"x": ["<IID982>"]})
    assert compose_hid("sid+iid", {"sid": sid, "iid": iid}).rendered("x") == "10 18 <IID982>"


def test_hid_cid_iid_drops_leaf():
    cid = handmade(Scheme.CID, {"x": ["<1>", "<9>", "<5>", "<4>"]})
    iid = handmade(Scheme.IID, {"x": ["<IID28>"]})
    assert compose_hid("cid+iid", {"cid": cid, "iid": iid}).rendered("x") == "<1> <9> <5> <IID28>"


def test_hid_semid_cid_orders():
    semid = handmade(Scheme.SEMID, {"x": ["<Makeup>", "<Lips>", "<Lip_Liners>", "<5>"]})
    cid = handmade(Scheme.CID, {"x": ["<1>", "<9>", "<5>", "<4>"]})
    parts = {"semid": semid, "cid": cid}
    semid_first = compose_hid("semid+cid", parts)
    assert semid_first.rendered("x") == "<Makeup> <Lips> <Lip_Liners> <1> <9> <5> <4>"
    cid_first = compose_hid("semid+cid", parts, order="cid-first")
    assert cid_first.rendered("x") == "<1> <9> <5> <4> <Makeup> <Lips> <Lip_Liners>"
    assert cid_first.params["order"] == "cid-first"


def test_hid_rejects_mismatched_items():
    sid = handmade(Scheme.SID, {"x": ["10"], "y": ["11"]})
    iid = handmade(Scheme.IID, {"x": ["<IID0>"], "z": ["<IID1>"]})
    with pytest.raises(ItemSetMismatchError) as excinfo:
        compose_hid("sid+iid", {"sid": sid, "iid": iid})
    assert excinfo.value.missing == ["y"] and excinfo.value.extra == ["z"]


def test_hid_argument_checks():
    with pytest.raises(ArgumentError):
        required_parts("rid+iid")
    iid = handmade(Scheme.IID, {"x": ["<IID0>"]})
    with pytest.raises(ArgumentError):
        compose_hid("sid+iid", {"iid": iid})
    with pytest.raises(ArgumentError):
        compose_hid("sid+iid", {"sid": iid, "iid": iid}, order="middle")


def all_assignments(split, metadata, numeric_model, title_model, seed, N=3, k=8):
    graph = build_cooccurrence_graph(split)
    items = split.items
    built = {
        "rid": index_rid(items, seed, numeric_model),
        "tid": index_tid(items, metadata, title_model),
        "iid": index_iid(items),
        "cid": index_cid(graph, N, k, seed),
        "semid": index_semid(items, metadata, mode="tree"),
        "semid-flat": index_semid(items, metadata, mode="non-tree"),
    }
    for ordering in UserOrdering:
        built[f"sid-{ordering.value}"] = index_sid(split, ordering, numeric_model, seed=seed)
    parts = {"sid": built["sid-TSO"], "iid": built["iid"], "cid": built["cid"], "semid": built["semid"]}
    for variant in ["sid+iid", "cid+iid", "semid+iid", "semid+cid"]:
        built[variant] = compose_hid(variant, parts)
    built["semid+cid/cid-first"] = compose_hid("semid+cid", parts, order="cid-first")
    return built


def test_every_scheme_yields_unique_ids(numeric_model, title_model):
    for seed in range(100):
        rng = np.random.default_rng(seed)
        catalog = int(rng.integers(10, 2001))
        corpus = random_corpus(rng, users=int(rng.integers(5, max(6, catalog // 2))), items=catalog)
        split = leave_one_out_split(corpus)
        assert len(split.items) <= 2000
        metadata = random_metadata(rng, split.items)
        N = int(rng.integers(2, 7))
        k = int(rng.integers(20, 41))
        built = all_assignments(split, metadata, numeric_model, title_model, seed, N=N, k=k)
        for name, assignment in built.items():
            assert sorted(assignment.items) == sorted(split.items), (seed, name)
            report = verify_assignment(None, assignment)
            assert report.unique, (seed, name)
            if name in ("cid", "semid"):
                assert report.prefix_free, (seed, name)


def test_shared_prefix_counts_common_ancestors():
    rng = np.random.default_rng(77)
    for trial in range(50):
        N = int(rng.integers(2, 7))
        graph = random_graph(rng, int(rng.integers(20, 201)), density=0.05, connected=bool(trial % 2))
        assignment = index_cid(graph, N, int(rng.integers(6, 41)), seed=trial)
        tree = assignment.tree
        for node in [tree.root, *tree.nodes()]:
            tokens = [child.token for child in node.children]
            assert len(tokens) == len(set(tokens))
        paths = tree.item_paths()
        for a in graph.nodes:
            for b in graph.nodes:
                common = 0
                for x, y in zip(paths[a], paths[b]):
                    if x is not y:
                        break
                    common += 1
                expected = len(paths[a]) + 1 if a == b else common
                assert shared_prefix_len(assignment, a, b) == expected
