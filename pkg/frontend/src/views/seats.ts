import type { App } from "../app.js";
import { el } from "../dom.js";
import { formatMoney, formatWhen } from "../format.js";

function seatLabel(row: number, col: number): string {
  return `${String.fromCharCode(65 + row)}${col + 1}`;
}

export async function renderSeats(
  app: App,
  showId: number,
  conflicts: string[],
): Promise<void> {
  if (!app.api.authenticated) {
    app.main.append(
      el("p", {}, el("a", { href: "#/login" }, "Sign in"), " to book seats."),
    );
    return;
  }

  const seats = await app.api.seats(showId);
  const selected = new Set<string>();

  app.main.append(
    el("h2", {}, "Pick your seats"),
    el(
      "p",
      {},
      `${formatWhen(seats.starts_at)} · ` +
        `${formatMoney(seats.price_minor, seats.currency)} per seat`,
    ),
  );

  if (conflicts.length > 0) {
    app.main.append(
      el(
        "p",
        { class: "warning", "data-testid": "conflict-banner" },
        `Someone beat you to ${conflicts.join(", ")}. ` +
          "The grid below is fresh; please pick again.",
      ),
    );
  }

  const houseful = seats.grid.every((row) => row.every((c) => c === "sold"));
  if (houseful) {
    app.main.append(
      el(
        "p",
        { class: "warning", "data-testid": "houseful-banner" },
        "Houseful",
      ),
    );
  }

  const continueBtn = el(
    "button",
    {
      "data-testid": "continue",
      disabled: true,
      onclick: () => {
        const picked = [...selected].sort().join(",");
        app.navigate(`#/checkout/${showId}?seats=${picked}`);
      },
    },
    "Continue to checkout",
  );

  const table = el("table", { class: "seat-grid", "data-testid": "seat-grid" });
  seats.grid.forEach((row, r) => {
    const tr = el("tr", {});
    row.forEach((state, c) => {
      const label = seatLabel(r, c);
      const classes = ["seat", state];
      if (conflicts.includes(label)) classes.push("conflict");
      const btn = el(
        "button",
        {
          class: classes.join(" "),
          "data-testid": `seat-${label}`,
          disabled: state === "sold",
          onclick: () => {
            if (selected.has(label)) {
              selected.delete(label);
              btn.classList.remove("selected");
            } else {
              selected.add(label);
              btn.classList.add("selected");
            }
            if (selected.size > 0) {
              continueBtn.removeAttribute("disabled");
            } else {
              continueBtn.setAttribute("disabled", "");
            }
          },
        },
        label,
      );
      tr.append(el("td", {}, btn));
    });
    table.append(tr);
  });

  app.main.append(table, continueBtn);
}
