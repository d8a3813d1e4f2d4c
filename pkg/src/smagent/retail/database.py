"""Read APIs, JSON persistence, and snapshot/rollback for the retail database."""

from __future__ import annotations

import json
from dataclasses import dataclass
from pathlib import Path

from smagent.retail.models import Order, Product, RetailDatabase, User


class NotFoundError(LookupError):
    """No record matches the given key."""


class AmbiguousMatchError(LookupError):
    """More than one record matches a lookup that must be unique."""


def load_database(path: str | Path) -> RetailDatabase:
    with open(path, encoding="utf-8") as fh:
        db = RetailDatabase.from_json(json.load(fh))
    db.validate()
    return db


def save_database(db: RetailDatabase, path: str | Path) -> None:
    Path(path).write_text(
        json.dumps(db.to_json(), sort_keys=True, indent=2) + "\n", encoding="utf-8"
    )


def snapshot(db: RetailDatabase) -> str:
    """Freeze the database state; the snapshot is its canonical serialization."""
    return db.canonical_serialization()


def restore(db: RetailDatabase, snap: str) -> None:
    """Restore a database in place from a snapshot taken with `snapshot`."""
    fresh = RetailDatabase.from_json(json.loads(snap))
    db.users = fresh.users
    db.products = fresh.products
    db.orders = fresh.orders
    db.revision = fresh.revision


@dataclass
class AuthLookup:
    """Result of an authentication lookup, optionally with order summaries."""

    user_id: str
    order_summaries: list[str]


def _order_summaries(db: RetailDatabase, user_id: str) -> list[str]:
    lines = []
    for oid in sorted(db.orders):
        order = db.orders[oid]
        if order.user_id != user_id:
            continue
        count = sum(li.quantity for li in order.line_items)
        lines.append(f"{oid}: {order.status}, {count} item(s)")
    return lines


def find_user_id_by_email(
    db: RetailDatabase, email: str, with_order_summary: bool = False
) -> AuthLookup:
    """Locate the unique user with this email.

    With `with_order_summary` the result carries one line per order of the
    user (id, status, item count) so the caller learns the order book in the
    same call that authenticates.
    """
    matches = [u for u in db.users.values() if u.email.lower() == email.strip().lower()]
    if not matches:
        raise NotFoundError(f"no user with email {email!r}")
    user = matches[0]
    summaries = _order_summaries(db, user.user_id) if with_order_summary else []
    return AuthLookup(user_id=user.user_id, order_summaries=summaries)


def find_user_id_by_name_zip(
    db: RetailDatabase,
    first_name: str,
    last_name: str,
    zip_code: str,
    with_order_summary: bool = False,
) -> AuthLookup:
    """Locate a user by first/last name and zip; the match must be unique."""
    matches = [
        u
        for u in db.users.values()
        if u.first_name.lower() == first_name.strip().lower()
        and u.last_name.lower() == last_name.strip().lower()
        and u.zip == zip_code.strip()
    ]
    if not matches:
        raise NotFoundError(f"no user named {first_name} {last_name} in zip {zip_code}")
    if len(matches) > 1:
        raise AmbiguousMatchError(
            f"{len(matches)} users named {first_name} {last_name} in zip {zip_code}; "
            "authenticate by email instead"
        )
    user = matches[0]
    summaries = _order_summaries(db, user.user_id) if with_order_summary else []
    return AuthLookup(user_id=user.user_id, order_summaries=summaries)


def get_user_details(db: RetailDatabase, user_id: str) -> User:
    user = db.users.get(user_id)
    if user is None:
        raise NotFoundError(f"no user {user_id!r}")
    return user


def get_order_details(db: RetailDatabase, order_id: str) -> Order:
    order = db.orders.get(order_id)
    if order is None:
        raise NotFoundError(f"no order {order_id!r}")
    return order


def get_product_details(db: RetailDatabase, product_id: str) -> Product:
    product = db.products.get(product_id)
    if product is None:
        raise NotFoundError(f"no product {product_id!r}")
    return product


def orders_of_user(db: RetailDatabase, user_id: str) -> list[Order]:
    """All orders of a user, sorted by order id for determinism."""
    get_user_details(db, user_id)
    return [db.orders[oid] for oid in sorted(db.orders) if db.orders[oid].user_id == user_id]
