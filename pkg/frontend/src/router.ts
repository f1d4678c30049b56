// Hash router. Routes look like #/movie/3 or #/seats/7?conflict=A1,A2.

export interface Route {
  name: string;
  params: string[];
  query: URLSearchParams;
}

export function parseHash(hash: string): Route {
  const raw = hash.replace(/^#\/?/, "");
  const [pathPart, queryPart] = raw.split("?", 2);
  const segments = pathPart.split("/").filter((s) => s.length > 0);
  return {
    name: segments[0] ?? "home",
    params: segments.slice(1),
    query: new URLSearchParams(queryPart ?? ""),
  };
}
