import type { App } from "../app.js";
import { el, clear } from "../dom.js";
import { ApiError } from "../api.js";

function field(name: string, placeholder: string, type = "text") {
  return el("input", { name, placeholder, type });
}

export async function renderAdminCatalog(app: App): Promise<void> {
  app.main.append(el("h2", {}, "Admin: catalog"));

  const movieList = el("ul", { "data-testid": "admin-movie-list" });
  async function refreshMovies(): Promise<void> {
    const movies = await app.api.movies({ sort: "relevance" });
    clear(movieList);
    for (const m of movies) {
      movieList.append(
        el(
          "li",
          {},
          `#${m.movie_id} ${m.title} `,
          el(
            "button",
            {
              onclick: async () => {
                await app.api.adminDeleteMovie(m.movie_id);
                await refreshMovies();
              },
            },
            "Delete",
          ),
        ),
      );
    }
  }
  await refreshMovies();

  const movieStatus = el("p", { "data-testid": "movie-status" });
  const mTitle = field("title", "title");
  const mGenres = field("genres", "genres (comma separated)");
  const mLanguage = field("language", "language");
  const mRelease = field("release_date", "release date (YYYY-MM-DD)");
  const movieForm = el(
    "form",
    {
      "data-testid": "movie-form",
      onsubmit: async (ev) => {
        ev.preventDefault();
        try {
          const created = await app.api.adminCreateMovie({
            title: mTitle.value,
            genres: mGenres.value.split(",").map((g) => g.trim()),
            language: mLanguage.value,
            release_date: mRelease.value,
          });
          movieStatus.textContent = `Created movie #${created.movie_id}.`;
          await refreshMovies();
        } catch (e) {
          movieStatus.textContent =
            e instanceof ApiError ? e.message : String(e);
        }
      },
    },
    el("h3", {}, "New movie"),
    mTitle,
    mGenres,
    mLanguage,
    mRelease,
    el("button", { type: "submit" }, "Create movie"),
    movieStatus,
  );

  const venueStatus = el("p", { "data-testid": "venue-status" });
  const vName = field("name", "venue name");
  const vAddress = field("address", "address");
  const vRows = field("rows", "rows (1-26)", "number");
  const vCols = field("cols", "seats per row (1-99)", "number");
  const venueForm = el(
    "form",
    {
      "data-testid": "venue-form",
      onsubmit: async (ev) => {
        ev.preventDefault();
        try {
          const created = await app.api.adminCreateVenue({
            name: vName.value,
            address: vAddress.value,
            rows: Number(vRows.value),
            cols: Number(vCols.value),
          });
          venueStatus.textContent = `Created venue #${created.venue_id}.`;
        } catch (e) {
          venueStatus.textContent =
            e instanceof ApiError ? e.message : String(e);
        }
      },
    },
    el("h3", {}, "New venue"),
    vName,
    vAddress,
    vRows,
    vCols,
    el("button", { type: "submit" }, "Create venue"),
    venueStatus,
  );

  const showStatus = el("p", { "data-testid": "show-status" });
  const sMovie = field("movie_id", "movie id", "number");
  const sVenue = field("venue_id", "venue id", "number");
  const sStarts = field("starts_at", "starts at (epoch ms)", "number");
  const sPrice = field("price_minor", "price (minor units)", "number");
  const showForm = el(
    "form",
    {
      "data-testid": "show-form",
      onsubmit: async (ev) => {
        ev.preventDefault();
        try {
          const created = await app.api.adminCreateShow({
            movie_id: Number(sMovie.value),
            venue_id: Number(sVenue.value),
            starts_at: Number(sStarts.value),
            price_minor: Number(sPrice.value),
          });
          showStatus.textContent = `Created show #${created.show_id}.`;
        } catch (e) {
          showStatus.textContent =
            e instanceof ApiError ? e.message : String(e);
        }
      },
    },
    el("h3", {}, "New show"),
    sMovie,
    sVenue,
    sStarts,
    sPrice,
    el("button", { type: "submit" }, "Create show"),
    showStatus,
  );

  app.main.append(movieForm, venueForm, showForm,
                  el("h3", {}, "Movies"), movieList);
}
