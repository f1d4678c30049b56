import type { App } from "../app.js";
import { el } from "../dom.js";
import { formatMoney, formatWhen } from "../format.js";

export async function renderVenue(app: App, venueId: number): Promise<void> {
  const venue = await app.api.venue(venueId);
  app.main.append(
    el("h2", {}, venue.name),
    el("p", {}, venue.address),
    el(
      "p",
      {},
      `${venue.rows} rows × ${venue.cols} seats (${venue.capacity} total)`,
    ),
    el("p", {}, `Amenities: ${venue.amenities.join(", ") || "none listed"}`),
  );

  const shows = await app.api.venueShows(venueId);
  const list = el("ul", { "data-testid": "venue-shows" });
  for (const s of shows) {
    list.append(
      el(
        "li",
        {},
        `${s.movie_title ?? `movie #${s.movie_id}`} · ${formatWhen(s.starts_at)}` +
          ` · ${formatMoney(s.price_minor, s.currency)}` +
          ` · ${s.seats_remaining} seats left `,
        el("a", { href: `#/seats/${s.show_id}` }, "Pick seats"),
      ),
    );
  }
  app.main.append(el("h3", {}, "Shows"), list);
}
