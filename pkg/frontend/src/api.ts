// Typed client for the stageseat HTTP API. The bearer token lives only in
// this object, never in localStorage or cookies.

export interface Policy {
  coin_value_minor: number;
  earn_per_seat: number;
  review_earn: number;
  redeem_cap_pct: number;
  cancel_cutoff_hours: number;
  currency_code: string;
}

export interface Movie {
  movie_id: number;
  title: string;
  description: string;
  genres: string[];
  director: string;
  cast: string[];
  language: string;
  release_date: string;
  poster_url: string | null;
  trailer_url: string | null;
}

export interface MovieDetail extends Movie {
  mean_rating: number | null;
  sentiment: {
    n_reviews: number;
    n_positive: number;
    n_negative: number;
    n_neutral: number;
    mean_compound: number;
  };
}

export interface Venue {
  venue_id: number;
  name: string;
  address: string;
  amenities: string[];
  accessibility: string[];
  rows: number;
  cols: number;
  capacity: number;
}

export interface Show {
  show_id: number;
  movie_id: number;
  movie_title: string | null;
  venue_id: number;
  starts_at: number;
  price_minor: number;
  currency: string;
  seats_remaining: number;
}

export interface SeatGrid {
  show_id: number;
  rows: number;
  cols: number;
  grid: ("free" | "sold")[][];
  price_minor: number;
  currency: string;
  starts_at: number;
}

export interface Quote {
  show_id: number;
  n_seats: number;
  subtotal_minor: number;
  max_redeemable_coins: number;
  coins_redeemed: number;
  discount_minor: number;
  total_minor: number;
  currency: string;
}

export interface Booking {
  booking_id: number;
  user_id: number;
  show_id: number;
  seats: string[];
  paid_minor: number;
  currency: string;
  coins_redeemed: number;
  status: "active" | "cancelled";
  created_at: number;
  coin_balance?: number;
}

export interface Review {
  review_id: number;
  user_id: number;
  movie_id: number;
  rating: number;
  text: string;
  sentiment: { compound: number; label: string };
  created_at: number;
  coin_balance?: number;
}

export interface Profile {
  user_id: number;
  username: string;
  email: string;
  role: string;
  preferences: Record<string, unknown>;
}

export interface CoinAccount {
  balance: number;
  ledger: {
    txn_id: number;
    delta: number;
    reason: string;
    ref_id: number | null;
    created_at: number;
  }[];
}

export interface CancelResult {
  booking_id: number;
  refund_minor: number;
  currency: string;
  coins_returned: number;
  coins_revoked: number;
  coin_balance: number;
}

export class ApiError extends Error {
  constructor(
    public status: number,
    public code: string,
    message: string,
  ) {
    super(message);
  }
}

export interface SearchParams {
  q?: string;
  genre?: string;
  language?: string;
  date_from?: string;
  date_to?: string;
  min_rating?: number;
  sort?: string;
}

export class ApiClient {
  private token: string | null = null;
  role: string | null = null;
  username: string | null = null;

  constructor(private baseUrl: string) {}

  get authenticated(): boolean {
    return this.token !== null;
  }

  get isAdmin(): boolean {
    return this.role === "admin";
  }

  logout(): void {
    this.token = null;
    this.role = null;
    this.username = null;
  }

  private async request<T>(
    method: string,
    path: string,
    body?: unknown,
  ): Promise<T> {
    const headers: Record<string, string> = {};
    if (body !== undefined) headers["Content-Type"] = "application/json";
    if (this.token) headers["Authorization"] = `Bearer ${this.token}`;
    const res = await fetch(`${this.baseUrl}${path}`, {
      method,
      headers,
      body: body === undefined ? undefined : JSON.stringify(body),
    });
    const text = await res.text();
    const data = text ? JSON.parse(text) : null;
    if (!res.ok) {
      const code = data?.error ?? data?.detail ?? "http_error";
      const message = data?.message ?? res.statusText;
      throw new ApiError(res.status, String(code), String(message));
    }
    return data as T;
  }

  // -- auth --------------------------------------------------------------

  async register(username: string, email: string, password: string) {
    return this.request<Profile>("POST", "/api/register", {
      username,
      email,
      password,
    });
  }

  async login(username: string, password: string): Promise<void> {
    const out = await this.request<{ token: string; role: string }>(
      "POST",
      "/api/login",
      { username, password },
    );
    this.token = out.token;
    this.role = out.role;
    this.username = username;
  }

  // -- catalog -----------------------------------------------------------

  policy() {
    return this.request<Policy>("GET", "/api/policy");
  }

  movies(params: SearchParams = {}) {
    const qs = new URLSearchParams();
    for (const [k, v] of Object.entries(params)) {
      if (v !== undefined && v !== "") qs.set(k, String(v));
    }
    const suffix = qs.toString() ? `?${qs}` : "";
    return this.request<Movie[]>("GET", `/api/movies${suffix}`);
  }

  movie(id: number) {
    return this.request<MovieDetail>("GET", `/api/movies/${id}`);
  }

  movieReviews(id: number) {
    return this.request<Review[]>("GET", `/api/movies/${id}/reviews`);
  }

  movieShows(id: number) {
    return this.request<Show[]>("GET", `/api/movies/${id}/shows`);
  }

  collections() {
    return this.request<Record<string, number[]>>("GET", "/api/collections");
  }

  venues(q = "") {
    const suffix = q ? `?q=${encodeURIComponent(q)}` : "";
    return this.request<Venue[]>("GET", `/api/venues${suffix}`);
  }

  venue(id: number) {
    return this.request<Venue>("GET", `/api/venues/${id}`);
  }

  venueShows(id: number, date?: string) {
    const suffix = date ? `?date=${date}` : "";
    return this.request<Show[]>("GET", `/api/venues/${id}/shows${suffix}`);
  }

  show(id: number) {
    return this.request<Show>("GET", `/api/shows/${id}`);
  }

  seats(showId: number) {
    return this.request<SeatGrid>("GET", `/api/shows/${showId}/seats`);
  }

  quote(showId: number, nSeats: number, coins: number) {
    return this.request<Quote>(
      "GET",
      `/api/shows/${showId}/quote?seats=${nSeats}&coins=${coins}`,
    );
  }

  recommendations(k = 10) {
    return this.request<{ movie_id: number; score: number }[]>(
      "GET",
      `/api/recommendations?k=${k}`,
    );
  }

  // -- bookings / reviews / me -------------------------------------------

  book(showId: number, seats: string[], coinsRedeemed: number) {
    return this.request<Booking>("POST", "/api/bookings", {
      show_id: showId,
      seats,
      coins_redeemed: coinsRedeemed,
    });
  }

  cancelBooking(bookingId: number) {
    return this.request<CancelResult>("DELETE", `/api/bookings/${bookingId}`);
  }

  myBookings() {
    return this.request<Booking[]>("GET", "/api/me/bookings");
  }

  postReview(movieId: number, rating: number, text: string) {
    return this.request<Review>("POST", `/api/movies/${movieId}/reviews`, {
      rating,
      text,
    });
  }

  profile() {
    return this.request<Profile>("GET", "/api/me/profile");
  }

  updateProfile(fields: { email?: string; preferences?: object }) {
    return this.request<Profile>("PUT", "/api/me/profile", fields);
  }

  coins() {
    return this.request<CoinAccount>("GET", "/api/me/coins");
  }

  // -- admin -------------------------------------------------------------

  adminCreateMovie(body: object) {
    return this.request<Movie>("POST", "/api/admin/movies", body);
  }

  adminCreateVenue(body: object) {
    return this.request<Venue>("POST", "/api/admin/venues", body);
  }

  adminCreateShow(body: {
    movie_id: number;
    venue_id: number;
    starts_at: number;
    price_minor: number;
  }) {
    return this.request<Show>("POST", "/api/admin/shows", body);
  }

  adminDeleteMovie(id: number) {
    return this.request<null>("DELETE", `/api/admin/movies/${id}`);
  }

  adminUsers() {
    return this.request<Profile[]>("GET", "/api/admin/users");
  }

  adminReport(name: "sales" | "occupancy" | "activity" | "sentiment",
              params: Record<string, string | number> = {}) {
    const qs = new URLSearchParams();
    for (const [k, v] of Object.entries(params)) qs.set(k, String(v));
    const suffix = qs.toString() ? `?${qs}` : "";
    return this.request<Record<string, unknown>>(
      "GET",
      `/api/admin/reports/${name}${suffix}`,
    );
  }
}
