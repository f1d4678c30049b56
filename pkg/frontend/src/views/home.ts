import type { App } from "../app.js";
import { el, clear } from "../dom.js";
import type { Movie } from "../api.js";

function movieCard(m: Movie): HTMLElement {
  return el(
    "div",
    { class: "movie-card", "data-testid": `movie-${m.movie_id}` },
    el("h3", {}, el("a", { href: `#/movie/${m.movie_id}` }, m.title)),
    el("p", {}, m.genres.join(", ")),
    el("p", {}, `${m.language} · ${m.release_date}`),
  );
}

export async function renderHome(app: App): Promise<void> {
  const q = el("input", { name: "q", placeholder: "search movies" });
  const genre = el("input", { name: "genre", placeholder: "genre" });
  const sort = el("select", { name: "sort" });
  for (const opt of ["relevance", "popularity", "release_date", "rating"]) {
    sort.append(el("option", { value: opt }, opt));
  }
  const results = el("div", { class: "results", "data-testid": "results" });

  async function search(): Promise<void> {
    const movies = await app.api.movies({
      q: q.value,
      genre: genre.value,
      sort: sort.value,
    });
    clear(results);
    if (movies.length === 0) {
      results.append(el("p", {}, "No movies found."));
    }
    for (const m of movies) results.append(movieCard(m));
  }

  const form = el(
    "form",
    {
      "data-testid": "search-form",
      onsubmit: (ev) => {
        ev.preventDefault();
        void search();
      },
    },
    q,
    genre,
    sort,
    el("button", { type: "submit" }, "Search"),
  );

  app.main.append(el("h2", {}, "Now showing"), form, results);
  await search();

  const collections = await app.api.collections();
  const section = el("div", { class: "collections" });
  for (const [name, ids] of Object.entries(collections)) {
    section.append(
      el(
        "p",
        { "data-testid": `collection-${name}` },
        `${name}: `,
        ...ids.map((id) => el("a", { href: `#/movie/${id}` }, `#${id} `)),
      ),
    );
  }
  app.main.append(el("h2", {}, "Collections"), section);

  if (app.api.authenticated) {
    const recs = await app.api.recommendations(5);
    app.main.append(
      el("h2", {}, "Recommended for you"),
      el(
        "p",
        { "data-testid": "recommendations" },
        ...recs.map((r) =>
          el("a", { href: `#/movie/${r.movie_id}` }, `#${r.movie_id} `),
        ),
      ),
    );
  }

  const venues = await app.api.venues();
  app.main.append(
    el("h2", {}, "Venues"),
    el(
      "ul",
      {},
      ...venues.map((v) =>
        el("li", {}, el("a", { href: `#/venue/${v.venue_id}` }, v.name)),
      ),
    ),
  );
}
