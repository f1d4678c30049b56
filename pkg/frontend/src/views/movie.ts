import type { App } from "../app.js";
import { el } from "../dom.js";
import { ApiError } from "../api.js";
import { formatMoney, formatWhen } from "../format.js";

export async function renderMovie(app: App, movieId: number): Promise<void> {
  const movie = await app.api.movie(movieId);
  app.main.append(
    el("h2", {}, movie.title),
    el("p", {}, movie.description),
    el(
      "p",
      {},
      `Directed by ${movie.director} · ${movie.genres.join(", ")} · ${movie.language}`,
    ),
    el(
      "p",
      { "data-testid": "movie-rating" },
      movie.mean_rating === null
        ? "No ratings yet"
        : `Average rating ${movie.mean_rating.toFixed(1)} / 5`,
    ),
  );

  const shows = await app.api.movieShows(movieId);
  const showList = el("ul", { "data-testid": "show-list" });
  for (const s of shows) {
    showList.append(
      el(
        "li",
        {},
        `${formatWhen(s.starts_at)} · ${formatMoney(s.price_minor, s.currency)}` +
          ` · ${s.seats_remaining} seats left `,
        el("a", { href: `#/seats/${s.show_id}` }, "Pick seats"),
      ),
    );
  }
  app.main.append(el("h3", {}, "Showtimes"), showList);

  // Reviews with the server-scored sentiment chip.
  const reviews = await app.api.movieReviews(movieId);
  const reviewList = el("div", { "data-testid": "review-list" });
  for (const r of reviews) {
    reviewList.append(
      el(
        "p",
        {},
        `${"★".repeat(r.rating)} ${r.text} `,
        el("span", { class: `chip chip-${r.sentiment.label}` }, r.sentiment.label),
      ),
    );
  }
  app.main.append(el("h3", {}, "Reviews"), reviewList);

  if (!app.api.authenticated) {
    app.main.append(
      el("p", {}, el("a", { href: "#/login" }, "Sign in"), " to review."),
    );
    return;
  }

  const rating = el("select", { name: "rating" });
  for (const n of [5, 4, 3, 2, 1]) {
    rating.append(el("option", { value: String(n) }, `${n} stars`));
  }
  const text = el("textarea", { name: "text", placeholder: "your review" });
  const outcome = el("p", { "data-testid": "review-outcome" });

  const form = el(
    "form",
    {
      "data-testid": "review-form",
      onsubmit: async (ev) => {
        ev.preventDefault();
        try {
          const posted = await app.api.postReview(
            movieId,
            Number(rating.value),
            text.value,
          );
          outcome.replaceChildren(
            el(
              "span",
              {
                class: `chip chip-${posted.sentiment.label}`,
                "data-testid": "sentiment-chip",
              },
              posted.sentiment.label,
            ),
            ` Thanks! Coin balance: `,
            el(
              "span",
              { "data-testid": "coin-balance" },
              String(posted.coin_balance),
            ),
          );
        } catch (e) {
          outcome.textContent =
            e instanceof ApiError && e.status === 409
              ? "You already reviewed this movie."
              : String(e instanceof Error ? e.message : e);
        }
      },
    },
    el("h3", {}, "Write a review"),
    rating,
    text,
    el("button", { type: "submit" }, "Post review"),
    outcome,
  );
  app.main.append(form);
}
