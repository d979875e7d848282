import threading

import pytest

from morristwin import infomodel
from morristwin.infomodel import (
    AddressSpace,
    DuplicatePath,
    InvalidPath,
    TypeMismatch,
    UnknownPath,
)


def test_define_then_read():
    space = AddressSpace()
    space.define("/game/state/board", infomodel.STATE_BLOB, "." * 24)
    value, revision = space.read("/game/state/board")
    assert value == "." * 24
    assert revision == 1


def test_define_twice_raises_duplicate():
    space = AddressSpace()
    space.define("/game/ply", infomodel.INTEGER, 0)
    with pytest.raises(DuplicatePath):
        space.define("/game/ply", infomodel.INTEGER, 1)


def test_write_increments_revision_by_one():
    space = AddressSpace()
    space.define("/game/ply", infomodel.INTEGER, 0)
    assert space.write("/game/ply", 1) == 2
    assert space.write("/game/ply", 2) == 3


def test_type_mismatch_rejected():
    space = AddressSpace()
    space.define("/players/white", infomodel.TEXT, "open")
    with pytest.raises(TypeMismatch):
        space.write("/players/white", 7)
    # booleans are not integers
    space.define("/game/ply", infomodel.INTEGER, 0)
    with pytest.raises(TypeMismatch):
        space.write("/game/ply", True)


def test_unknown_path_and_invalid_path():
    space = AddressSpace()
    with pytest.raises(UnknownPath):
        space.read("/nope")
    with pytest.raises(UnknownPath):
        space.write("/nope", 1)
    with pytest.raises(InvalidPath):
        space.define("no-leading-slash", infomodel.TEXT, "")
    with pytest.raises(InvalidPath):
        space.define("/Upper/Case", infomodel.TEXT, "")


def test_subscription_snapshot_then_deltas():
    space = AddressSpace()
    space.define("/game/ply", infomodel.INTEGER, 0)
    space.define("/game/state/status", infomodel.TEXT, "ongoing")
    space.define("/players/white", infomodel.TEXT, "open")
    sub = space.subscribe("/game")
    snapshot = sub.drain()
    assert {e.path for e in snapshot} == {"/game/ply", "/game/state/status"}
    assert all(e.revision == 1 for e in snapshot)
    space.write("/game/ply", 1)
    space.write("/players/white", "alice")  # not under /game
    deltas = sub.drain()
    assert [(e.path, e.value, e.revision) for e in deltas] == [("/game/ply", 1, 2)]


def test_prefix_matching_is_segment_aligned():
    space = AddressSpace()
    space.define("/game/ply", infomodel.INTEGER, 0)
    space.define("/gamex/ply", infomodel.INTEGER, 0)
    sub = space.subscribe("/game")
    assert {e.path for e in sub.drain()} == {"/game/ply"}


def test_late_subscriber_reconstructs_same_mapping():
    space = AddressSpace()
    early = None
    for i in range(3):
        space.define(f"/cells/c{i}/status", infomodel.TEXT, "registered")
    early = space.subscribe("/cells")
    for i in range(3):
        space.write(f"/cells/c{i}/status", "synced")
    space.write("/cells/c1/status", "diverged")
    late = space.subscribe("/cells")

    def final_mapping(events):
        view = {}
        for e in events:
            view[e.path] = (e.value, e.revision)
        return view

    early_view = final_mapping(early.drain())
    late_view = final_mapping(late.drain())
    assert early_view == late_view


def test_unsubscribe_stops_delivery():
    space = AddressSpace()
    space.define("/game/ply", infomodel.INTEGER, 0)
    sub = space.subscribe("/game")
    sub.drain()
    space.unsubscribe(sub.id)
    space.write("/game/ply", 5)
    assert sub.drain() == []


def test_concurrent_writers_keep_revision_order():
    space = AddressSpace()
    space.define("/game/ply", infomodel.INTEGER, 0)
    sub = space.subscribe("/game/ply")
    start = threading.Barrier(4)

    def writer(k):
        start.wait()
        for i in range(250):
            space.write("/game/ply", k * 1000 + i)

    threads = [threading.Thread(target=writer, args=(k,)) for k in range(4)]
    for t in threads:
        t.start()
    for t in threads:
        t.join()

    _, revision = space.read("/game/ply")
    assert revision == 1 + 1000
    events = sub.drain()
    # snapshot plus exactly one event per write, in revision order
    assert len(events) == 1 + 1000
    assert [e.revision for e in events] == list(range(1, 1002))


def test_read_after_write_sees_at_least_that_revision():
    space = AddressSpace()
    space.define("/game/ply", infomodel.INTEGER, 0)
    r = space.write("/game/ply", 41)
    _, seen = space.read("/game/ply")
    assert seen >= r


def test_event_count_equals_revision_delta():
    space = AddressSpace()
    space.define("/game/ply", infomodel.INTEGER, 0)
    sub = space.subscribe("/game/ply")
    sub.drain()
    _, before = space.read("/game/ply")
    for i in range(17):
        space.write("/game/ply", i)
    _, after = space.read("/game/ply")
    assert len(sub.drain()) == after - before
