// API target resolution. A deployment can set window.API_BASE_URL from a
// tiny inline script before the app module loads; tests pass it directly.

declare global {
  interface Window {
    API_BASE_URL?: string;
  }
}

export function apiBaseUrl(): string {
  if (typeof window !== "undefined" && window.API_BASE_URL) {
    return window.API_BASE_URL.replace(/\/+$/, "");
  }
  return "http://127.0.0.1:8008";
}
