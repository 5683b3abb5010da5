package fixtures.app;

import javax.net.ssl.SSLContext;
import javax.net.ssl.TrustManager;

// Wires a hand-rolled trust manager array into the TLS context.
public class HomemadeTrust {
    public SSLContext build(TrustManager[] managers) throws Exception {
        SSLContext context = SSLContext.getInstance("TLSv1.3");
        context.init(null, managers, null);
        return context;
    }
}
