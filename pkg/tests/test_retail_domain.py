"""Retail environment: lookups, dry-run purity, commits, snapshot/rollback."""

import json
import random

import pytest

from smagent.money import cents_from_str, format_cents
from smagent.retail.database import (
    AmbiguousMatchError,
    NotFoundError,
    find_user_id_by_email,
    find_user_id_by_name_zip,
    get_order_details,
    get_product_details,
    get_user_details,
    load_database,
    orders_of_user,
    restore,
    snapshot,
)
from smagent.retail.mutations import (
    ALREADY_RETURNED_OR_EXCHANGED,
    ITEM_NOT_IN_ORDER,
    ITEM_UNAVAILABLE,
    ORDER_NOT_FOUND,
    ORDER_NOT_PENDING,
    PAYMENT_METHOD_UNKNOWN,
    CancelPendingOrder,
    ConfirmationTokenError,
    ExchangeDeliveredOrderItems,
    ItemSwap,
    ModifyPendingOrderAddress,
    ModifyPendingOrderItems,
    PreconditionChangedError,
    ReturnDeliveredOrderItems,
    commit_mutation,
    request_fingerprint,
    request_from_json,
    request_to_json,
    validate_mutation,
)
from smagent.retail.models import Address
from smagent.retail.seeddata import build_seed_db


class StubToken:
    def __init__(self, request):
        self.fingerprint = request_fingerprint(request)
        self.used = False


def test_money_round_trip():
    assert cents_from_str("54.90") == 5490
    assert cents_from_str("54.9") == 5490
    assert cents_from_str("-30") == -3000
    assert format_cents(5490) == "54.90"
    assert format_cents(-3000) == "-30.00"
    with pytest.raises(ValueError):
        cents_from_str("12.345")


class TestLookups:
    def test_find_user_by_email(self, db):
        assert find_user_id_by_email(db, "mei.kovacs@example.com").user_id == "mei_kovacs_8020"

    def test_find_user_by_email_not_found(self, db):
        with pytest.raises(NotFoundError):
            find_user_id_by_email(db, "nobody@example.com")

    def test_email_lookup_with_order_summaries(self, db):
        result = find_user_id_by_email(db, "mei.kovacs@example.com", with_order_summary=True)
        mei_orders = orders_of_user(db, "mei_kovacs_8020")
        assert len(result.order_summaries) == len(mei_orders) == 4
        for line, order in zip(result.order_summaries, mei_orders):
            assert order.order_id in line
            assert order.status in line

    def test_find_user_by_name_zip(self, db):
        assert find_user_id_by_name_zip(db, "Mei", "Kovacs", "28236").user_id == "mei_kovacs_8020"

    def test_find_user_by_name_zip_not_found(self, db):
        with pytest.raises(NotFoundError):
            find_user_id_by_name_zip(db, "Mei", "Kovacs", "00000")

    def test_find_user_by_name_zip_ambiguous(self, db):
        with pytest.raises(AmbiguousMatchError):
            find_user_id_by_name_zip(db, "James", "Kim", "94105")

    def test_get_product_details_shoes(self, db):
        product = get_product_details(db, "6938111410")
        assert product.name == "Shoes"
        assert all("size" in item.attributes for item in product.items.values())

    def test_get_order_details_not_found(self, db):
        with pytest.raises(NotFoundError):
            get_order_details(db, "#W0000000")

    def test_get_user_details_round_trips_with_data_file(self, db, repo_root):
        on_disk = load_database(repo_root / "data" / "retail_db.json")
        user = get_user_details(db, "ethan_garcia_1261")
        assert user.to_json() == on_disk.users["ethan_garcia_1261"].to_json()

    def test_data_file_matches_builder(self, db, repo_root):
        on_disk = load_database(repo_root / "data" / "retail_db.json")
        assert on_disk.canonical_serialization() == db.canonical_serialization()


class TestValidateMutation:
    def test_cancel_on_delivered_order_invalid(self, db):
        report = validate_mutation(db, CancelPendingOrder(order_id="#W8255453", reason="x"))
        assert not report.valid
        assert ORDER_NOT_PENDING in report.codes

    def test_cancel_without_reason_has_followup(self, db):
        report = validate_mutation(db, CancelPendingOrder(order_id="#W3071263"))
        assert report.valid
        assert any("reason" in f for f in report.followups)

    def test_unknown_order(self, db):
        report = validate_mutation(db, CancelPendingOrder(order_id="#W0000000", reason="x"))
        assert not report.valid and ORDER_NOT_FOUND in report.codes

    def test_exchange_on_returned_order_invalid(self, db):
        report = validate_mutation(
            db,
            ExchangeDeliveredOrderItems(
                order_id="#W7242815",
                replacements=[ItemSwap("10960317", "21993373")],
            ),
        )
        assert not report.valid
        assert ALREADY_RETURNED_OR_EXCHANGED in report.codes

    def test_return_on_exchanged_order_invalid(self, db):
        report = validate_mutation(
            db, ReturnDeliveredOrderItems(order_id="#W8632528", item_ids=["13030521"])
        )
        assert not report.valid
        assert ALREADY_RETURNED_OR_EXCHANGED in report.codes

    def test_modify_items_price_delta(self, db):
        # 26625588 costs 29.90, 54186936 costs 39.15: delta must be +9.25
        report = validate_mutation(
            db,
            ModifyPendingOrderItems(
                order_id="#W5565470",
                replacements=[ItemSwap("26625588", "54186936")],
            ),
        )
        assert report.valid
        assert report.price_delta_cents == cents_from_str("39.15") - cents_from_str("29.90")

    def test_modify_items_unavailable_target(self, db):
        report = validate_mutation(
            db,
            ModifyPendingOrderItems(
                order_id="#W5565470",
                replacements=[ItemSwap("19841307", "61026402")],
            ),
        )
        assert not report.valid and ITEM_UNAVAILABLE in report.codes

    def test_modify_items_not_in_order(self, db):
        report = validate_mutation(
            db,
            ModifyPendingOrderItems(
                order_id="#W5565470",
                replacements=[ItemSwap("99999999", "54186936")],
            ),
        )
        assert not report.valid and ITEM_NOT_IN_ORDER in report.codes

    def test_unknown_payment_method(self, db):
        report = validate_mutation(
            db,
            ReturnDeliveredOrderItems(
                order_id="#W8255453", item_ids=["26625588"], payment_method_id="credit_card_0"
            ),
        )
        assert not report.valid and PAYMENT_METHOD_UNKNOWN in report.codes

    def test_dry_run_purity(self, db):
        before = db.canonical_serialization()
        requests = [
            CancelPendingOrder(order_id="#W3071263", reason="no longer needed"),
            ModifyPendingOrderAddress(
                order_id="#W3071263",
                new_address=Address("9 New Street", "Charlotte", "NC", "28236"),
            ),
            ModifyPendingOrderItems(
                order_id="#W5565470", replacements=[ItemSwap("19841307", "77231945")]
            ),
            ReturnDeliveredOrderItems(order_id="#W8255453", item_ids=["26625588", "34298444"]),
            ExchangeDeliveredOrderItems(
                order_id="#W6310710", replacements=[ItemSwap("26730411", "37551302")]
            ),
            CancelPendingOrder(order_id="#W0000000", reason="x"),
        ]
        for m in requests:
            validate_mutation(db, m)
        assert db.canonical_serialization() == before
        assert db.revision == 0


class TestCommitMutation:
    def test_commit_cancel_sets_status_and_reason(self, db):
        m = CancelPendingOrder(order_id="#W3071263", reason="no longer needed")
        receipt = commit_mutation(db, m, StubToken(m))
        order = db.orders["#W3071263"]
        assert order.status == "cancelled"
        assert order.cancellation_reason == "no longer needed"
        assert db.revision == 1
        assert receipt.revision_after == 1
        assert receipt.amount_cents == -cents_from_str("49.45")

    def test_commit_requires_matching_token(self, db):
        m = CancelPendingOrder(order_id="#W3071263", reason="no longer needed")
        other = CancelPendingOrder(order_id="#W3071263", reason="different reason")
        with pytest.raises(ConfirmationTokenError):
            commit_mutation(db, m, StubToken(other))
        with pytest.raises(ConfirmationTokenError):
            commit_mutation(db, m, None)
        assert db.revision == 0

    def test_token_is_single_use(self, db):
        m = ReturnDeliveredOrderItems(
            order_id="#W8255453", item_ids=["26625588"], payment_method_id="paypal_7732922"
        )
        token = StubToken(m)
        commit_mutation(db, m, token)
        with pytest.raises(ConfirmationTokenError):
            commit_mutation(db, m, token)

    def test_replayed_return_fails_precondition(self, db):
        m = ReturnDeliveredOrderItems(
            order_id="#W8255453", item_ids=["26625588"], payment_method_id="paypal_7732922"
        )
        commit_mutation(db, m, StubToken(m))
        with pytest.raises(PreconditionChangedError):
            commit_mutation(db, m, StubToken(m))
        assert db.revision == 1

    def test_address_modification_touches_only_address(self, db):
        order_before = db.orders["#W3071263"].to_json()
        m = ModifyPendingOrderAddress(
            order_id="#W3071263",
            new_address=Address("9 New Street", "Charlotte", "NC", "28236"),
        )
        commit_mutation(db, m, StubToken(m))
        order_after = db.orders["#W3071263"].to_json()
        assert order_after["shipping_address"] != order_before["shipping_address"]
        assert json.dumps(order_after["line_items"]) == json.dumps(order_before["line_items"])
        for key in ("status", "payment_method_id", "post_delivery_action"):
            assert order_after[key] == order_before[key]

    def test_commit_cancel_without_reason_refused(self, db):
        m = CancelPendingOrder(order_id="#W3071263")
        with pytest.raises(PreconditionChangedError):
            commit_mutation(db, m, StubToken(m))
        assert db.revision == 0

    def test_exchange_swaps_items_and_marks_action(self, db):
        m = ExchangeDeliveredOrderItems(
            order_id="#W6310710",
            replacements=[ItemSwap("26730411", "37551302")],
            payment_method_id="credit_card_1620755",
        )
        receipt = commit_mutation(db, m, StubToken(m))
        order = db.orders["#W6310710"]
        assert order.post_delivery_action == "exchanged"
        assert {li.item_id for li in order.line_items} == {"37551302", "14550125"}
        assert receipt.amount_cents == cents_from_str("1399.00") - cents_from_str("1349.99")


class TestSnapshotRestore:
    def test_round_trip(self, db):
        snap = snapshot(db)
        m = CancelPendingOrder(order_id="#W3071263", reason="no longer needed")
        commit_mutation(db, m, StubToken(m))
        assert db.canonical_serialization() != snap
        restore(db, snap)
        assert db.canonical_serialization() == snap

    def test_snapshots_of_unchanged_db_are_byte_equal(self, db):
        assert snapshot(db) == snapshot(db)

    def test_consecutive_restored_episodes_start_at_same_revision(self, db):
        snap = snapshot(db)
        for _ in range(5):
            assert db.revision == 0
            m = CancelPendingOrder(order_id="#W3071263", reason="no longer needed")
            commit_mutation(db, m, StubToken(m))
            restore(db, snap)


class TestProperties:
    def test_exchange_return_once_over_random_sequences(self, db):
        """No sequence of committed mutations yields two post-delivery actions."""
        rng = random.Random(7)
        delivered = [o.order_id for o in db.orders.values() if o.status == "delivered"]
        actions_applied = {oid: 0 for oid in delivered}
        for _ in range(300):
            oid = rng.choice(delivered)
            order = db.orders[oid]
            line = rng.choice(order.line_items)
            if rng.random() < 0.5:
                m = ReturnDeliveredOrderItems(order_id=oid, item_ids=[line.item_id])
            else:
                product = db.products[line.product_id]
                new_id = rng.choice(sorted(product.items))
                m = ExchangeDeliveredOrderItems(
                    order_id=oid, replacements=[ItemSwap(line.item_id, new_id)]
                )
            try:
                commit_mutation(db, m, StubToken(m))
                actions_applied[oid] += 1
            except PreconditionChangedError:
                pass
            assert actions_applied[oid] <= 1
            assert db.orders[oid].post_delivery_action in (None, "returned", "exchanged")

    def test_revision_strictly_increases_only_on_commit(self, db):
        assert db.revision == 0
        validate_mutation(db, CancelPendingOrder(order_id="#W3071263", reason="x"))
        assert db.revision == 0
        m = CancelPendingOrder(order_id="#W3071263", reason="x")
        commit_mutation(db, m, StubToken(m))
        assert db.revision == 1

    def test_referential_integrity_after_commits(self, db):
        m1 = ModifyPendingOrderItems(
            order_id="#W5565470", replacements=[ItemSwap("19841307", "77231945")]
        )
        commit_mutation(db, m1, StubToken(m1))
        m2 = ExchangeDeliveredOrderItems(
            order_id="#W1539823", replacements=[ItemSwap("55835374", "30741976")]
        )
        commit_mutation(db, m2, StubToken(m2))
        db.validate()

    def test_request_json_round_trip(self, db):
        requests = [
            CancelPendingOrder(order_id="#W1", reason="no longer needed"),
            ModifyPendingOrderAddress(
                order_id="#W2", new_address=Address("1 A St", "Austin", "TX", "78712")
            ),
            ModifyPendingOrderItems(
                order_id="#W3",
                replacements=[ItemSwap("a", "b")],
                payment_method_id="paypal_1",
            ),
            ReturnDeliveredOrderItems(order_id="#W4", item_ids=["x", "y"], payment_method_id="gc_1"),
            ExchangeDeliveredOrderItems(order_id="#W5", replacements=[ItemSwap("c", "d")]),
        ]
        for m in requests:
            again = request_from_json(json.loads(json.dumps(request_to_json(m))))
            assert request_fingerprint(again) == request_fingerprint(m)
