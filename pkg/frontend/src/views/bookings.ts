import type { App } from "../app.js";
import { el } from "../dom.js";
import { ApiError } from "../api.js";
import { formatMoney, formatWhen } from "../format.js";

export async function renderBookings(app: App): Promise<void> {
  if (!app.api.authenticated) {
    app.navigate("#/login");
    return;
  }
  const bookings = await app.api.myBookings();
  app.main.append(el("h2", {}, "My bookings"));
  if (bookings.length === 0) {
    app.main.append(el("p", {}, "No bookings yet."));
    return;
  }
  const list = el("div", { "data-testid": "booking-list" });
  for (const b of bookings) {
    const status = el("span", { class: `status-${b.status}` }, b.status);
    const row = el(
      "p",
      { "data-testid": `booking-${b.booking_id}` },
      `#${b.booking_id} · show ${b.show_id} · seats ${b.seats.join(", ")}` +
        ` · ${formatMoney(b.paid_minor, b.currency)}` +
        ` · ${formatWhen(b.created_at)} · `,
      status,
      " ",
    );
    if (b.status === "active") {
      row.append(
        el(
          "button",
          {
            "data-testid": `cancel-${b.booking_id}`,
            onclick: async () => {
              try {
                const result = await app.api.cancelBooking(b.booking_id);
                status.textContent = "cancelled";
                status.className = "status-cancelled";
                row.append(
                  el(
                    "span",
                    {},
                    ` Refunded ${formatMoney(result.refund_minor, result.currency)},` +
                      ` coin balance ${result.coin_balance}.`,
                  ),
                );
              } catch (e) {
                row.append(
                  el(
                    "span",
                    { class: "error" },
                    ` ${e instanceof ApiError ? e.message : String(e)}`,
                  ),
                );
              }
            },
          },
          "Cancel",
        ),
      );
    }
    list.append(row);
  }
  app.main.append(list);
}
